/**
 * Minimal deterministic software canvas.
 *
 * Figures are drawn into an RGBA buffer with integer primitives (no
 * anti-aliasing, no font hinting, no timestamps), so identical inputs
 * produce byte-identical PNG files. Encoding uses the zlib built into
 * node; the PNG container is written directly.
 */

import { deflateSync } from "node:zlib";

import { GLYPH_H, GLYPH_W, glyphRows, textWidth } from "./font.js";

export type Color = readonly [number, number, number];

export const WHITE: Color = [255, 255, 255];
export const BLACK: Color = [0, 0, 0];
export const GRAY: Color = [150, 150, 150];
export const LIGHT_GRAY: Color = [220, 220, 220];
export const BLUE: Color = [31, 119, 180];
export const ORANGE: Color = [255, 127, 14];
export const GREEN: Color = [44, 160, 44];
export const RED: Color = [214, 39, 40];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGBA rows, top to bottom

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    this.clear(background);
  }

  clear(color: Color): void {
    for (let i = 0; i < this.width * this.height; i++) {
      this.pixels[4 * i] = color[0];
      this.pixels[4 * i + 1] = color[1];
      this.pixels[4 * i + 2] = color[2];
      this.pixels[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, color: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.pixels[i] = color[0];
    this.pixels[i + 1] = color[1];
    this.pixels[i + 2] = color[2];
    this.pixels[i + 3] = 255;
  }

  at(x: number, y: number): Color {
    const i = 4 * (y * this.width + x);
    return [this.pixels[i], this.pixels[i + 1], this.pixels[i + 2]];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Color): void {
    const x1 = Math.min(this.width, x0 + w);
    const y1 = Math.min(this.height, y0 + h);
    for (let y = Math.max(0, y0); y < y1; y++) {
      for (let x = Math.max(0, x0); x < x1; x++) this.set(x, y, color);
    }
  }

  /** Bresenham segment; `thick` widens perpendicular-ish via a small disc. */
  line(x0: number, y0: number, x1: number, y1: number, color: Color, thick = 1): void {
    let [x, y] = [Math.round(x0), Math.round(y0)];
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.dot(x, y, color, thick);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  dot(x: number, y: number, color: Color, size = 1): void {
    if (size <= 1) {
      this.set(x, y, color);
      return;
    }
    const r = Math.floor(size / 2);
    for (let oy = -r; oy <= r; oy++) {
      for (let ox = -r; ox <= r; ox++) {
        if (ox * ox + oy * oy <= r * r) this.set(x + ox, y + oy, color);
      }
    }
  }

  marker(x: number, y: number, color: Color, half = 2): void {
    this.fillRect(x - half, y - half, 2 * half + 1, 2 * half + 1, color);
  }

  text(x: number, y: number, s: string, color: Color, scale = 1): void {
    let cx = x;
    for (const ch of s) {
      const rows = glyphRows(ch);
      if (rows !== undefined) {
        for (let r = 0; r < GLYPH_H; r++) {
          for (let c = 0; c < GLYPH_W; c++) {
            if (rows[r] & (1 << (GLYPH_W - 1 - c))) {
              this.fillRect(cx + c * scale, y + r * scale, scale, scale, color);
            }
          }
        }
      }
      cx += (GLYPH_W + 1) * scale;
    }
  }

  textCentered(cx: number, y: number, s: string, color: Color, scale = 1): void {
    this.text(Math.round(cx - textWidth(s, scale) / 2), y, s, color, scale);
  }

  /** Vertical text running upward, for y-axis labels. */
  textVertical(x: number, cy: number, s: string, color: Color, scale = 1): void {
    const w = textWidth(s, scale);
    let ty = Math.round(cy + w / 2);
    for (const ch of s) {
      const rows = glyphRows(ch);
      if (rows !== undefined) {
        for (let r = 0; r < GLYPH_H; r++) {
          for (let c = 0; c < GLYPH_W; c++) {
            if (rows[r] & (1 << (GLYPH_W - 1 - c))) {
              // rotate 90 degrees counter-clockwise
              this.fillRect(x + r * scale, ty - (c + 1) * scale, scale, scale, color);
            }
          }
        }
      }
      ty -= (GLYPH_W + 1) * scale;
    }
  }

  png(): Buffer {
    const stride = this.width * 4;
    const raw = Buffer.alloc((stride + 1) * this.height);
    for (let y = 0; y < this.height; y++) {
      raw[y * (stride + 1)] = 0; // filter: none
      raw.set(this.pixels.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
    }
    const ihdr = Buffer.alloc(13);
    ihdr.writeUInt32BE(this.width, 0);
    ihdr.writeUInt32BE(this.height, 4);
    ihdr[8] = 8; // bit depth
    ihdr[9] = 6; // RGBA
    const idat = deflateSync(raw, { level: 9 });
    return Buffer.concat([
      Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]),
      chunk("IHDR", ihdr),
      chunk("IDAT", idat),
      chunk("IEND", Buffer.alloc(0)),
    ]);
  }
}

const CRC_TABLE = new Uint32Array(256);
for (let n = 0; n < 256; n++) {
  let c = n;
  for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
  CRC_TABLE[n] = c >>> 0;
}

export function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(4);
  head.writeUInt32BE(data.length, 0);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, body, tail]);
}
