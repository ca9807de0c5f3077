/**
 * Figure rendering: contour polylines (plus optional grid overlay) to SVG
 * or PNG.  SVG is written directly; PNG goes through a small internal
 * rasterizer (Bresenham lines on an RGBA buffer, zlib-compressed IDAT), so
 * no native imaging dependency is needed.
 */

import { deflateSync } from "zlib";
import { FieldGrid } from "./csv.js";
import { ContourSet, Polyline } from "./contour.js";

export interface Frame {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  width: number;
  height: number;
  pad: number;
}

export function frameFor(grid: FieldGrid, width = 720, pad = 24): Frame {
  const xs = grid.data.get("x")!;
  const ys = grid.data.get("y")!;
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (let k = 0; k < xs.length; k++) {
    if (xs[k] < xMin) xMin = xs[k];
    if (xs[k] > xMax) xMax = xs[k];
    if (ys[k] < yMin) yMin = ys[k];
    if (ys[k] > yMax) yMax = ys[k];
  }
  const aspect = (yMax - yMin) / (xMax - xMin);
  const height = Math.max(64, Math.round((width - 2 * pad) * aspect) + 2 * pad);
  return { xMin, xMax, yMin, yMax, width, height, pad };
}

function mapper(f: Frame) {
  const sx = (f.width - 2 * f.pad) / (f.xMax - f.xMin);
  const sy = (f.height - 2 * f.pad) / (f.yMax - f.yMin);
  return (p: [number, number]): [number, number] => [
    f.pad + (p[0] - f.xMin) * sx,
    f.height - f.pad - (p[1] - f.yMin) * sy,   // y up
  ];
}

/** Grid overlay polylines (every lattice line) in physical space. */
export function gridOverlay(grid: FieldGrid): Polyline[] {
  const xs = grid.data.get("x")!;
  const ys = grid.data.get("y")!;
  const lines: Polyline[] = [];
  for (let i = 0; i < grid.ni; i++) {
    const line: Polyline = [];
    for (let j = 0; j < grid.nj; j++) {
      line.push([xs[i * grid.nj + j], ys[i * grid.nj + j]]);
    }
    lines.push(line);
  }
  for (let j = 0; j < grid.nj; j++) {
    const line: Polyline = [];
    for (let i = 0; i < grid.ni; i++) {
      line.push([xs[i * grid.nj + j], ys[i * grid.nj + j]]);
    }
    lines.push(line);
  }
  return lines;
}

export function renderSvg(frame: Frame, contours: ContourSet[],
                          overlay: Polyline[] | null, title: string): string {
  const map = mapper(frame);
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" ` +
    `width="${frame.width}" height="${frame.height}" ` +
    `viewBox="0 0 ${frame.width} ${frame.height}">`);
  parts.push(`<rect width="100%" height="100%" fill="white"/>`);
  if (title) {
    parts.push(`<text x="${frame.width / 2}" y="14" font-size="12" ` +
      `text-anchor="middle" font-family="sans-serif">${title}</text>`);
  }
  if (overlay) {
    parts.push(`<g stroke="#c9c9c9" stroke-width="0.5" fill="none">`);
    for (const line of overlay) {
      const pts = line.map((p) => map(p).map((v) => v.toFixed(2)).join(","));
      parts.push(`<polyline points="${pts.join(" ")}"/>`);
    }
    parts.push(`</g>`);
  }
  for (const set of contours) {
    parts.push(`<g stroke="#14428a" stroke-width="1" fill="none" ` +
      `data-level="${set.level}">`);
    for (const line of set.lines) {
      const pts = line.map((p) => map(p).map((v) => v.toFixed(2)).join(","));
      parts.push(`<polyline points="${pts.join(" ")}"/>`);
    }
    parts.push(`</g>`);
  }
  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}

// ---------------------------------------------------------------------------
// PNG output
// ---------------------------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(4);
  head.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([head, body, crc]);
}

class Raster {
  data: Uint8Array;

  constructor(public width: number, public height: number) {
    this.data = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]) {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const k = (y * this.width + x) * 3;
    this.data[k] = rgb[0];
    this.data[k + 1] = rgb[1];
    this.data[k + 2] = rgb[2];
  }

  line(a: [number, number], b: [number, number],
       rgb: [number, number, number]) {
    let x0 = Math.round(a[0]), y0 = Math.round(a[1]);
    const x1 = Math.round(b[0]), y1 = Math.round(b[1]);
    const dx = Math.abs(x1 - x0), dy = -Math.abs(y1 - y0);
    const sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(x0, y0, rgb);
      if (x0 === x1 && y0 === y1) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; x0 += sx; }
      if (e2 <= dx) { err += dx; y0 += sy; }
    }
  }

  encodePng(): Buffer {
    const ihdr = Buffer.alloc(13);
    ihdr.writeUInt32BE(this.width, 0);
    ihdr.writeUInt32BE(this.height, 4);
    ihdr[8] = 8;    // bit depth
    ihdr[9] = 2;    // truecolour
    const rowBytes = this.width * 3;
    const filtered = Buffer.alloc((rowBytes + 1) * this.height);
    for (let y = 0; y < this.height; y++) {
      filtered[y * (rowBytes + 1)] = 0;
      filtered.set(this.data.subarray(y * rowBytes, (y + 1) * rowBytes),
                   y * (rowBytes + 1) + 1);
    }
    return Buffer.concat([
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
      chunk("IHDR", ihdr),
      chunk("IDAT", deflateSync(filtered)),
      chunk("IEND", Buffer.alloc(0)),
    ]);
  }
}

export function renderPng(frame: Frame, contours: ContourSet[],
                          overlay: Polyline[] | null): Buffer {
  const map = mapper(frame);
  const img = new Raster(frame.width, frame.height);
  const drawPolyline = (line: Polyline, rgb: [number, number, number]) => {
    for (let k = 0; k + 1 < line.length; k++) {
      img.line(map(line[k]), map(line[k + 1]), rgb);
    }
  };
  if (overlay) {
    for (const line of overlay) drawPolyline(line, [201, 201, 201]);
  }
  for (const set of contours) {
    for (const line of set.lines) drawPolyline(line, [20, 66, 138]);
  }
  return img.encodePng();
}
