/**
 * Reader for curvmhd field dumps.
 *
 * The solver writes row-major CSVs with integer lattice indices in the
 * first two columns (`i,j,x,y,rho,u,...` for MHD fields, `i,j,x,y,phi`
 * for scalar runs).  Rows are reshaped onto the (ni, nj) lattice; any
 * column can then be queried as a 2D field, plus the derived field
 * `bsq` = B1^2 + B2^2 + B3^2.
 */

import { readFileSync } from "fs";

export interface FieldGrid {
  ni: number;
  nj: number;
  columns: string[];
  /** column name -> row-major (ni*nj) values */
  data: Map<string, Float64Array>;
}

export function parseFieldCsv(path: string): FieldGrid {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new Error(`${path}: empty field dump`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  if (columns[0] !== "i" || columns[1] !== "j") {
    throw new Error(
      `${path}: expected "i,j,..." header, got "${lines[0]}"`,
    );
  }
  const nRows = lines.length - 1;
  const raw = columns.map(() => new Float64Array(nRows));
  for (let r = 0; r < nRows; r++) {
    const parts = lines[r + 1].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`${path}: row ${r + 2} has ${parts.length} fields, ` +
        `expected ${columns.length}`);
    }
    for (let c = 0; c < columns.length; c++) {
      raw[c][r] = Number(parts[c]);
      if (Number.isNaN(raw[c][r])) {
        throw new Error(`${path}: non-numeric entry at row ${r + 2}, ` +
          `column "${columns[c]}"`);
      }
    }
  }
  const ni = Math.round(raw[0][nRows - 1]) + 1;
  const nj = Math.round(raw[1][nRows - 1]) + 1;
  if (ni * nj !== nRows) {
    throw new Error(`${path}: ${nRows} rows do not fill a ` +
      `${ni} x ${nj} lattice`);
  }
  const data = new Map<string, Float64Array>();
  for (let c = 0; c < columns.length; c++) {
    data.set(columns[c], raw[c]);
  }
  return { ni, nj, columns, data };
}

/** Fetch a plottable field, including the derived magnetic energy `bsq`. */
export function fieldValues(grid: FieldGrid, name: string): Float64Array {
  const direct = grid.data.get(name);
  if (direct) return direct;
  if (name === "bsq") {
    const b1 = grid.data.get("B1");
    const b2 = grid.data.get("B2");
    const b3 = grid.data.get("B3");
    if (!b1 || !b2 || !b3) {
      throw new Error('field "bsq" needs B1, B2, B3 columns');
    }
    const out = new Float64Array(b1.length);
    for (let k = 0; k < out.length; k++) {
      out[k] = b1[k] * b1[k] + b2[k] * b2[k] + b3[k] * b3[k];
    }
    return out;
  }
  throw new Error(`unknown field "${name}"; available: ` +
    `${grid.columns.join(", ")}, bsq`);
}

export function at(grid: FieldGrid, vals: Float64Array,
                   i: number, j: number): number {
  return vals[i * grid.nj + j];
}
