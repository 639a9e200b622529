/**
 * Marching squares over a regular grid with missing-value masking. Grid
 * values are field[iy][ix]; cells touching a masked (null) corner are
 * skipped. Returns line segments in (ix, iy) index coordinates.
 */

export type Segment = [number, number, number, number];

export function contourSegments(field: (number | null)[][], level: number): Segment[] {
  const ny = field.length;
  const nx = ny > 0 ? field[0].length : 0;
  const segments: Segment[] = [];

  const interp = (a: number, b: number): number => {
    const span = b - a;
    if (span === 0) return 0.5;
    const t = (level - a) / span;
    return Math.min(1, Math.max(0, t));
  };

  for (let iy = 0; iy < ny - 1; iy++) {
    for (let ix = 0; ix < nx - 1; ix++) {
      const v00 = field[iy][ix];
      const v10 = field[iy][ix + 1];
      const v01 = field[iy + 1][ix];
      const v11 = field[iy + 1][ix + 1];
      if (v00 === null || v10 === null || v01 === null || v11 === null) continue;
      let code = 0;
      if (v00 >= level) code |= 1;
      if (v10 >= level) code |= 2;
      if (v11 >= level) code |= 4;
      if (v01 >= level) code |= 8;
      if (code === 0 || code === 15) continue;

      // edge midpoints with linear interpolation, in index coordinates
      const bottom: [number, number] = [ix + interp(v00, v10), iy];
      const top: [number, number] = [ix + interp(v01, v11), iy + 1];
      const left: [number, number] = [ix, iy + interp(v00, v01)];
      const right: [number, number] = [ix + 1, iy + interp(v10, v11)];

      const join = (a: [number, number], b: [number, number]) =>
        segments.push([a[0], a[1], b[0], b[1]]);

      switch (code) {
        case 1:
        case 14:
          join(left, bottom);
          break;
        case 2:
        case 13:
          join(bottom, right);
          break;
        case 3:
        case 12:
          join(left, right);
          break;
        case 4:
        case 11:
          join(right, top);
          break;
        case 5: // saddle: split by the cell mean
          if ((v00 + v10 + v01 + v11) / 4 >= level) {
            join(left, top);
            join(bottom, right);
          } else {
            join(left, bottom);
            join(right, top);
          }
          break;
        case 6:
        case 9:
          join(bottom, top);
          break;
        case 7:
        case 8:
          join(left, top);
          break;
        case 10:
          if ((v00 + v10 + v01 + v11) / 4 >= level) {
            join(left, bottom);
            join(right, top);
          } else {
            join(left, top);
            join(bottom, right);
          }
          break;
      }
    }
  }
  return segments;
}

/** Evenly spaced interior contour levels between the field extremes. */
export function contourLevels(min: number, max: number, count = 9): number[] {
  if (!(max > min)) return [];
  const levels: number[] = [];
  for (let i = 1; i <= count; i++) {
    levels.push(min + ((max - min) * i) / (count + 1));
  }
  return levels;
}
