/**
 * Canvas drawing: top view (x, y) and side view (radial reach, z) of the
 * arm polyline, the bench line and the base keep-out footprint.
 */

import { Vec3 } from "./kinematics.js";

const SPAN_MM = 500; // half-width of the top view, full width of the side view
const ARM_COLOR = "#2c7fb8";
const JOINT_COLOR = "#0b3d61";
const SCENE_COLOR = "#999";
const TARGET_COLOR = "#d95f02";

interface Mapper {
  (u: number, v: number): [number, number];
}

function clear(ctx: CanvasRenderingContext2D): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
}

function polyline(ctx: CanvasRenderingContext2D, pts: [number, number][]): void {
  ctx.beginPath();
  pts.forEach(([px, py], i) => (i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py)));
  ctx.stroke();
}

function joints(ctx: CanvasRenderingContext2D, pts: [number, number][]): void {
  ctx.fillStyle = JOINT_COLOR;
  for (const [px, py] of pts) {
    ctx.beginPath();
    ctx.arc(px, py, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

/** Top view: world (x, y) with x to the right, y up, base centered. */
export function drawTopView(
  canvas: HTMLCanvasElement,
  chain: Vec3[] | null,
  target: { x: number; y: number } | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  clear(ctx);
  const scale = canvas.width / (2 * SPAN_MM);
  const map: Mapper = (x, y) => [canvas.width / 2 + x * scale, canvas.height / 2 - y * scale];

  ctx.strokeStyle = SCENE_COLOR;
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.arc(...map(0, 0), 40 * scale, 0, 2 * Math.PI); // base keep-out footprint
  ctx.stroke();

  if (target) {
    ctx.strokeStyle = TARGET_COLOR;
    const [tx, ty] = map(target.x, target.y);
    polyline(ctx, [
      [tx - 6, ty],
      [tx + 6, ty],
    ]);
    polyline(ctx, [
      [tx, ty - 6],
      [tx, ty + 6],
    ]);
  }

  if (chain) {
    const pts = chain.map(([x, y]) => map(x, y));
    ctx.strokeStyle = ARM_COLOR;
    ctx.lineWidth = 3;
    polyline(ctx, pts);
    joints(ctx, pts);
  }
}

/** Side view: radial reach sqrt(x^2 + y^2) against z, bench at the bottom. */
export function drawSideView(
  canvas: HTMLCanvasElement,
  chain: Vec3[] | null,
  target: { x: number; y: number; z: number } | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  clear(ctx);
  const scale = canvas.width / SPAN_MM;
  const benchY = canvas.height - 20;
  const map: Mapper = (r, z) => [10 + r * scale, benchY - z * scale];

  ctx.strokeStyle = SCENE_COLOR;
  ctx.lineWidth = 1;
  polyline(ctx, [
    [0, benchY],
    [canvas.width, benchY],
  ]); // bench plane
  const [bx0, by0] = map(0, 0);
  const [bx1, by1] = map(40, 63);
  ctx.strokeRect(bx0, by1, bx1 - bx0, by0 - by1); // base keep-out cylinder

  if (target) {
    ctx.strokeStyle = TARGET_COLOR;
    const [tx, ty] = map(Math.hypot(target.x, target.y), target.z);
    polyline(ctx, [
      [tx - 6, ty],
      [tx + 6, ty],
    ]);
    polyline(ctx, [
      [tx, ty - 6],
      [tx, ty + 6],
    ]);
  }

  if (chain) {
    const pts = chain.map(([x, y, z]) => map(Math.hypot(x, y), z));
    ctx.strokeStyle = ARM_COLOR;
    ctx.lineWidth = 3;
    polyline(ctx, pts);
    joints(ctx, pts);
  }
}
