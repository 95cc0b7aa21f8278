// Number rendering shared by tables and chart tick labels.

export function fmt(value: unknown): string {
  if (value === null || value === undefined) return "";
  if (typeof value === "string") return value; // "Inf" arrives as a string
  if (typeof value === "number") {
    if (!Number.isFinite(value)) return value > 0 ? "Inf" : "-Inf";
    if (Number.isInteger(value) && Math.abs(value) < 1e15) return String(value);
    return formatSignificant(value, 6);
  }
  return String(value);
}

export function formatSignificant(x: number, digits: number): string {
  if (x === 0) return "0";
  const magnitude = Math.abs(x);
  if (magnitude < 1e-4 || magnitude >= 1e6) {
    return trimExponent(x.toExponential(digits - 1));
  }
  const rounded = Number(x.toPrecision(digits));
  return String(rounded);
}

function trimExponent(text: string): string {
  return text.replace(/\.?0+e/, "e").replace(/e\+?(-?)0*(\d)/, "e$1$2");
}
