// HTML table rendering from service payloads.

import { fmt } from "./format.js";

export function renderTable(
  container: HTMLElement,
  header: string[],
  rows: (number | string | null)[][],
  className = "data-table",
): HTMLTableElement {
  const table = document.createElement("table");
  table.className = className;
  const thead = table.createTHead();
  const headRow = thead.insertRow();
  for (const name of header) {
    const th = document.createElement("th");
    th.textContent = name;
    headRow.appendChild(th);
  }
  const tbody = table.createTBody();
  for (const row of rows) {
    const tr = tbody.insertRow();
    row.forEach((value, column) => {
      const cell = tr.insertCell();
      cell.textContent = fmt(value);
      cell.dataset.col = header[column];
    });
  }
  container.appendChild(table);
  return table;
}

export function rowsFromObjects(
  header: string[],
  objects: Record<string, number | string | null>[],
): (number | string | null)[][] {
  return objects.map((obj) => header.map((key) => (key in obj ? obj[key] : null)));
}
