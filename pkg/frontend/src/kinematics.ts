/**
 * Client-side forward kinematics of the 5-DOF arm.
 *
 * Mirrors the core library's homogeneous-matrix chain (yaw base with the
 * column height in its z slot, three pitch joints with a built-in 90 degree
 * offset on the forearm link, gripper roll) so the pendant can redraw the
 * arm from telemetry angles alone. Cross-checked against a core-generated
 * golden file in the tests.
 */

export type Vec3 = [number, number, number];

export interface LinkLengths {
  a1: number;
  a2: number;
  a3: number;
  a4: number;
}

export const DEFAULT_LINKS: LinkLengths = { a1: 63, a2: 145, a3: 170, a4: 110 };

export const degToRad = (d: number): number => (d * Math.PI) / 180;
export const radToDeg = (r: number): number => (r * 180) / Math.PI;

/** 4x4 row-major homogeneous transform. */
type Mat4 = number[];

const identity = (): Mat4 => [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];

function multiply(a: Mat4, b: Mat4): Mat4 {
  const out = new Array<number>(16).fill(0);
  for (let i = 0; i < 4; i++) {
    for (let j = 0; j < 4; j++) {
      let acc = 0;
      for (let k = 0; k < 4; k++) {
        acc += a[i * 4 + k] * b[k * 4 + j];
      }
      out[i * 4 + j] = acc;
    }
  }
  return out;
}

function rotZ(theta: number): Mat4 {
  const c = Math.cos(theta);
  const s = Math.sin(theta);
  return [c, -s, 0, 0, s, c, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];
}

function rotY(theta: number): Mat4 {
  const c = Math.cos(theta);
  const s = Math.sin(theta);
  return [c, 0, s, 0, 0, 1, 0, 0, -s, 0, c, 0, 0, 0, 0, 1];
}

function translateZ(dz: number): Mat4 {
  const m = identity();
  m[11] = dz;
  return m;
}

const origin = (m: Mat4): Vec3 => [m[3], m[7], m[11]];

/**
 * Joint-origin chain (base foot, shoulder, elbow, wrist, tool) for the
 * given radian joint angles; theta5 only rolls the gripper.
 */
export function jointChain(thetas: number[], links: LinkLengths = DEFAULT_LINKS): Vec3[] {
  const [t1, t2, t3, t4, t5] = thetas;
  const base = rotZ(t1);
  base[11] = links.a1; // column height folded into the yaw matrix
  const m1 = multiply(base, rotY(t2));
  const m2 = multiply(translateZ(links.a2), rotY(Math.PI / 2 + t3));
  const m3 = multiply(translateZ(links.a3), rotY(t4));
  const m4 = multiply(translateZ(links.a4), rotZ(t5));
  const c1 = m1;
  const c2 = multiply(c1, m2);
  const c3 = multiply(c2, m3);
  const c4 = multiply(c3, m4);
  return [[0, 0, 0], origin(c1), origin(c2), origin(c3), origin(c4)];
}

export function toolPosition(thetas: number[], links: LinkLengths = DEFAULT_LINKS): Vec3 {
  const chain = jointChain(thetas, links);
  return chain[chain.length - 1];
}
