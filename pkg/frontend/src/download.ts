// Chart and table downloads. Charts are exported from the live SVG (and
// rasterized to PNG via a canvas); tables are fetched from the service's
// CSV/LaTeX export so the bytes match the server exactly.

export function downloadBlob(name: string, blob: Blob): void {
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = name;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

export function svgMarkup(svg: SVGSVGElement): string {
  const clone = svg.cloneNode(true) as SVGSVGElement;
  clone.setAttribute("xmlns", "http://www.w3.org/2000/svg");
  return new XMLSerializer().serializeToString(clone);
}

export function downloadSvg(name: string, svg: SVGSVGElement): void {
  downloadBlob(name, new Blob([svgMarkup(svg)], { type: "image/svg+xml" }));
}

export async function downloadPng(name: string, svg: SVGSVGElement): Promise<void> {
  const markup = svgMarkup(svg);
  const image = new Image();
  const url = URL.createObjectURL(new Blob([markup], { type: "image/svg+xml" }));
  await new Promise<void>((resolve, reject) => {
    image.onload = () => resolve();
    image.onerror = () => reject(new Error("could not rasterize chart"));
    image.src = url;
  });
  const canvas = document.createElement("canvas");
  canvas.width = (svg.width.baseVal.value || 640) * 2;
  canvas.height = (svg.height.baseVal.value || 360) * 2;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas unavailable");
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(image, 0, 0, canvas.width, canvas.height);
  URL.revokeObjectURL(url);
  const blob = await new Promise<Blob | null>((resolve) => canvas.toBlob(resolve, "image/png"));
  if (blob) downloadBlob(name, blob);
}

export async function downloadServed(url: string, name: string): Promise<void> {
  const response = await fetch(url);
  if (!response.ok) throw new Error(`download failed with status ${response.status}`);
  downloadBlob(name, await response.blob());
}
