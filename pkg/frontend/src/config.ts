/**
 * Flat `key = value` grammar shared with the simulation CLI: one entry per
 * line, `#` starts a comment, keys match [A-Za-z0-9_.-]+, values are bare
 * tokens or comma lists. Last duplicate wins.
 */

const KEY_RE = /^[A-Za-z0-9_.-]+$/;

export class ConfigError extends Error {}

export function parseConfig(text: string, source = "<config>"): Map<string, string> {
  const out = new Map<string, string>();
  const lines = text.split(/\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].split("#", 1)[0].trim();
    if (!line) continue;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new ConfigError(`${source}:${i + 1}: expected 'key = value', got ${JSON.stringify(lines[i])}`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (!KEY_RE.test(key)) {
      throw new ConfigError(`${source}:${i + 1}: invalid key ${JSON.stringify(key)}`);
    }
    out.set(key, value);
  }
  return out;
}

export class ConfigView {
  constructor(
    readonly entries: Map<string, string>,
    readonly source = "<config>",
  ) {}

  has(key: string): boolean {
    return this.entries.has(key);
  }

  raw(key: string, fallback?: string): string | undefined {
    return this.entries.get(key) ?? fallback;
  }

  require(key: string): string {
    const value = this.entries.get(key);
    if (value === undefined) {
      throw new ConfigError(`${this.source}: missing required field '${key}'`);
    }
    return value;
  }

  getFloat(key: string, fallback?: number): number | undefined {
    const value = this.entries.get(key);
    if (value === undefined) return fallback;
    const parsed = Number(value);
    if (!Number.isFinite(parsed)) {
      throw new ConfigError(`${this.source}: field '${key}': not a real number: ${JSON.stringify(value)}`);
    }
    return parsed;
  }

  getInt(key: string, fallback?: number): number | undefined {
    const value = this.getFloat(key, fallback);
    if (value === undefined) return undefined;
    if (!Number.isInteger(value)) {
      throw new ConfigError(`${this.source}: field '${key}': not an integer: ${value}`);
    }
    return value;
  }

  getEnum(key: string, choices: readonly string[], fallback?: string): string | undefined {
    const value = this.entries.get(key) ?? fallback;
    if (value === undefined) return undefined;
    if (!choices.includes(value)) {
      throw new ConfigError(
        `${this.source}: field '${key}': expected one of ${choices.join("|")}, got ${JSON.stringify(value)}`,
      );
    }
    return value;
  }
}
