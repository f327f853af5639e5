/**
 * Exact rational strings, as used by the server ("num/den" or "num").
 *
 * The explorer never computes mathematics itself; these helpers only
 * parse, format and snap coordinates so queries stay exact.
 */

export interface Frac {
  num: bigint;
  den: bigint; // always positive
}

export function parseFrac(text: string): Frac {
  const trimmed = text.trim();
  const slash = trimmed.indexOf("/");
  if (slash < 0) {
    return normalize({ num: BigInt(trimmed), den: 1n });
  }
  return normalize({
    num: BigInt(trimmed.slice(0, slash)),
    den: BigInt(trimmed.slice(slash + 1)),
  });
}

function gcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a;
  b = b < 0n ? -b : b;
  while (b) {
    [a, b] = [b, a % b];
  }
  return a;
}

function normalize(f: Frac): Frac {
  if (f.den === 0n) throw new Error("zero denominator");
  let { num, den } = f;
  if (den < 0n) {
    num = -num;
    den = -den;
  }
  const g = gcd(num, den);
  return g > 1n ? { num: num / g, den: den / g } : { num, den };
}

export function formatFrac(f: Frac): string {
  return f.den === 1n ? f.num.toString() : `${f.num}/${f.den}`;
}

/** Approximate decimal, explicitly marked as approximate for display. */
export function approxDecimal(f: Frac, places = 4): string {
  const scale = 10n ** BigInt(places);
  const scaled = (f.num * scale) / f.den;
  const negative = scaled < 0n;
  const abs = negative ? -scaled : scaled;
  const whole = abs / scale;
  const frac = (abs % scale).toString().padStart(places, "0");
  return `${negative ? "-" : ""}${whole}.${frac}`;
}

export function displayExact(text: string, withApprox = true): string {
  const f = parseFrac(text);
  if (f.den === 1n || !withApprox) return formatFrac(f);
  return `${formatFrac(f)} (≈ ${approxDecimal(f)})`;
}

/**
 * Snap a picked floating coordinate to the exact rational grid with the
 * given denominator (default 64), returning the server string form.
 */
export function snapToGrid(value: number, denominator = 64): string {
  const num = BigInt(Math.round(value * denominator));
  return formatFrac(normalize({ num, den: BigInt(denominator) }));
}
