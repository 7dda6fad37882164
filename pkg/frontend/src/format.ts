/** Display formatting; never changes a number's value, only its text form. */

/** Persistence arrives as number | null where null encodes infinity. */
export function formatPersistence(value: number | null): string {
  if (value === null) return "∞";
  if (!Number.isFinite(value)) return "∞";
  return value >= 100 ? value.toFixed(0) : value.toPrecision(3);
}

export function formatStrength(value: number): string {
  return value.toFixed(2);
}

/** "bars-toy/dense/3" → "dense/3" for compact card headers. */
export function shortNapId(napId: string): string {
  const parts = napId.split("/");
  return parts.length >= 3 ? parts.slice(1).join("/") : napId;
}
