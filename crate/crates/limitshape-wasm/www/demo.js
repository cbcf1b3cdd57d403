// Rows of a tableau run down the canvas (x), columns run across (y).
import init, { level_curves, surface_grid, sampled_surface } from "./pkg/limitshape_wasm.js";

const $ = (id) => document.getElementById(id);

function color(t) {
  // Dark blue through white to dark red.
  t = Math.min(1, Math.max(0, t));
  const a = t < 0.5 ? t * 2 : (1 - t) * 2;
  const r = t < 0.5 ? 40 + 215 * a : 255 - 80 * (1 - a);
  const b = t < 0.5 ? 255 - 80 * (1 - a) : 40 + 215 * a;
  const g = 40 + 215 * a;
  return [r, g, b];
}

function paintGrid(canvas, values, rows, cols, lo, hi) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cw = canvas.width / Math.max(rows, cols);
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const [r, g, b] = color((values[i * cols + j] - lo) / (hi - lo));
      ctx.fillStyle = `rgb(${r | 0},${g | 0},${b | 0})`;
      ctx.fillRect(j * cw, i * cw, Math.ceil(cw), Math.ceil(cw));
    }
  }
}

function strokeCurves(canvas, pts, count, points, style) {
  const ctx = canvas.getContext("2d");
  const s = canvas.width;
  ctx.strokeStyle = style;
  ctx.lineWidth = 1.5;
  for (let c = 0; c < count; c++) {
    ctx.beginPath();
    for (let k = 0; k < points; k++) {
      const x = pts[2 * (c * points + k)], y = pts[2 * (c * points + k) + 1];
      if (k === 0) ctx.moveTo(y * s, x * s); else ctx.lineTo(y * s, x * s);
    }
    ctx.stroke();
  }
}

function alphas(count) {
  return Float64Array.from({ length: count }, (_, i) => (i + 1) / (count + 1));
}

function drawCurves() {
  const theta = Number($("curves-theta").value);
  const count = Math.max(1, Math.min(30, Number($("curves-count").value) | 0));
  $("curves-theta-out").textContent = theta.toFixed(2);
  const canvas = $("curves");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(0, 0, theta * canvas.width, canvas.height);
  strokeCurves(canvas, level_curves(theta, alphas(count), 200), count, 200, "#124");
}

function drawSurface() {
  const theta = Number($("surface-theta").value);
  const pp = $("surface-pp").checked;
  $("surface-theta-out").textContent = theta.toFixed(2);
  const res = 120;
  const values = surface_grid(theta, res, pp);
  // Squeeze the grid into [0, 1] × [0, θ].
  const canvas = $("surface");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const ch = canvas.height / res, cw = (theta * canvas.width) / res;
  const hi = pp ? Math.min(8, Math.max(...values)) : 1;
  for (let i = 0; i < res; i++) {
    for (let j = 0; j < res; j++) {
      const [r, g, b] = color(values[i * res + j] / hi);
      ctx.fillStyle = `rgb(${r | 0},${g | 0},${b | 0})`;
      ctx.fillRect(j * cw, i * ch, Math.ceil(cw), Math.ceil(ch));
    }
  }
}

function drawSample() {
  const n = Math.max(2, Math.min(200, Number($("sample-n").value) | 0));
  const seed = Math.max(0, Number($("sample-seed").value) | 0);
  const data = sampled_surface(n, seed);
  const entries = data.subarray(0, n * n), limit = data.subarray(n * n);
  const canvas = $("sample");
  paintGrid(canvas, entries, n, n, 0, 1);
  const count = 9;
  strokeCurves(canvas, level_curves(1, alphas(count), 200), count, 200, "#000");
  let gap = 0;
  for (let k = 0; k < n * n; k++) gap += Math.abs(entries[k] - limit[k]);
  $("sample-gap").textContent = (gap / (n * n)).toFixed(4);
}

function guarded(f) {
  return () => {
    try {
      $("status").textContent = "";
      f();
    } catch (e) {
      $("status").textContent = String(e);
    }
  };
}

await init();
for (const id of ["curves-theta", "curves-count"]) $(id).addEventListener("input", guarded(drawCurves));
for (const id of ["surface-theta", "surface-pp"]) $(id).addEventListener("input", guarded(drawSurface));
$("sample-go").addEventListener("click", guarded(drawSample));
guarded(drawCurves)();
guarded(drawSurface)();
guarded(drawSample)();
