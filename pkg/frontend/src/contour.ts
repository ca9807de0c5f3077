/**
 * Marching-squares isolines on the computational lattice, mapped to the
 * physical curvilinear coordinates.
 *
 * Contour vertices live on lattice-cell edges, so each vertex has one
 * integer index and one fractional one; the physical position follows by
 * linear interpolation of the node coordinates along that edge (bilinear
 * in general).
 */

import { FieldGrid, at } from "./csv.js";

export type Polyline = Array<[number, number]>;

interface Segment {
  a: [number, number];
  b: [number, number];
}

/** Lattice-space segments of one iso-level of a row-major field. */
export function marchingSquares(ni: number, nj: number, vals: Float64Array,
                                level: number): Segment[] {
  const segs: Segment[] = [];
  const v = (i: number, j: number) => vals[i * nj + j];
  for (let i = 0; i < ni - 1; i++) {
    for (let j = 0; j < nj - 1; j++) {
      const z00 = v(i, j);
      const z10 = v(i + 1, j);
      const z11 = v(i + 1, j + 1);
      const z01 = v(i, j + 1);
      let code = 0;
      if (z00 > level) code |= 1;
      if (z10 > level) code |= 2;
      if (z11 > level) code |= 4;
      if (z01 > level) code |= 8;
      if (code === 0 || code === 15) continue;

      const frac = (za: number, zb: number) => (level - za) / (zb - za);
      // edge crossing points in lattice coordinates
      const bottom = (): [number, number] => [i + frac(z00, z10), j];
      const right = (): [number, number] => [i + 1, j + frac(z10, z11)];
      const top = (): [number, number] => [i + frac(z01, z11), j + 1];
      const left = (): [number, number] => [i, j + frac(z00, z01)];

      switch (code) {
        case 1: case 14: segs.push({ a: left(), b: bottom() }); break;
        case 2: case 13: segs.push({ a: bottom(), b: right() }); break;
        case 3: case 12: segs.push({ a: left(), b: right() }); break;
        case 4: case 11: segs.push({ a: right(), b: top() }); break;
        case 6: case 9: segs.push({ a: bottom(), b: top() }); break;
        case 7: case 8: segs.push({ a: left(), b: top() }); break;
        case 5:
          segs.push({ a: left(), b: bottom() });
          segs.push({ a: right(), b: top() });
          break;
        case 10:
          segs.push({ a: bottom(), b: right() });
          segs.push({ a: left(), b: top() });
          break;
      }
    }
  }
  return segs;
}

/** Bilinear map from fractional lattice coordinates to physical (x, y). */
export function toPhysical(grid: FieldGrid, p: [number, number]):
    [number, number] {
  const xs = grid.data.get("x")!;
  const ys = grid.data.get("y")!;
  const i0 = Math.min(Math.floor(p[0]), grid.ni - 2);
  const j0 = Math.min(Math.floor(p[1]), grid.nj - 2);
  const fi = p[0] - i0;
  const fj = p[1] - j0;
  const idx = (i: number, j: number) => i * grid.nj + j;
  const w00 = (1 - fi) * (1 - fj);
  const w10 = fi * (1 - fj);
  const w01 = (1 - fi) * fj;
  const w11 = fi * fj;
  const x = w00 * xs[idx(i0, j0)] + w10 * xs[idx(i0 + 1, j0)]
    + w01 * xs[idx(i0, j0 + 1)] + w11 * xs[idx(i0 + 1, j0 + 1)];
  const y = w00 * ys[idx(i0, j0)] + w10 * ys[idx(i0 + 1, j0)]
    + w01 * ys[idx(i0, j0 + 1)] + w11 * ys[idx(i0 + 1, j0 + 1)];
  return [x, y];
}

/** Equally spaced levels including both endpoints ("N lines between a and b"). */
export function contourLevels(min: number, max: number, count: number):
    number[] {
  if (!(min < max)) throw new Error("contour range needs min < max");
  if (count < 2) throw new Error("need at least 2 contour levels");
  const out: number[] = [];
  for (let k = 0; k < count; k++) {
    out.push(min + ((max - min) * k) / (count - 1));
  }
  return out;
}

export interface ContourSet {
  level: number;
  /** physical-space segments, flattened as polyline pairs */
  lines: Polyline[];
}

export function contoursInPhysicalSpace(grid: FieldGrid, vals: Float64Array,
                                        levels: number[]): ContourSet[] {
  return levels.map((level) => {
    const segs = marchingSquares(grid.ni, grid.nj, vals, level);
    const lines: Polyline[] = segs.map((s) => [
      toPhysical(grid, s.a),
      toPhysical(grid, s.b),
    ]);
    return { level, lines };
  });
}
