import init, { solve_example, stencil_weights, phi_curves } from "./pkg/gnsfd_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function frame(canvas, xs, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const finite = (v) => v !== null && Number.isFinite(v);
  const left = series.filter((s) => !s.right).flatMap((s) => s.ys.filter(finite));
  const right = series.filter((s) => s.right).flatMap((s) => s.ys.filter(finite));
  const range = (vals) => {
    let lo = Math.min(...vals), hi = Math.max(...vals);
    if (!Number.isFinite(lo)) return [0, 1];
    if (lo === hi) { lo -= 1; hi += 1; }
    return [lo, hi];
  };
  const [x0, x1] = range(xs);
  const ly = range(left), ry = range(right);
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y, r) => {
    const [a, b] = r ? ry : ly;
    return h - pad - ((y - a) / (b - a)) * (h - 2 * pad);
  };
  ctx.strokeStyle = "#bbb";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(ly[1].toPrecision(3), 2, pad + 4);
  ctx.fillText(ly[0].toPrecision(3), 2, h - pad);
  if (right.length) {
    ctx.fillText(ry[1].toFixed(1), w - pad + 4, pad + 4);
    ctx.fillText(ry[0].toFixed(1), w - pad + 4, h - pad);
  }
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 20, h - pad + 14);
  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    if (s.bars) {
      const bw = (w - 2 * pad) / (xs.length * s.bars.of + 1);
      xs.forEach((x, i) => {
        const y = s.ys[i];
        if (!finite(y)) return;
        const bx = pad + (i * s.bars.of + s.bars.index + 0.5) * bw;
        ctx.fillRect(bx, Math.min(py(0), py(y)), bw * 0.9, Math.abs(py(y) - py(0)));
      });
      continue;
    }
    ctx.beginPath();
    let pen = false;
    xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!finite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y, s.right)) : ctx.moveTo(px(x), py(y, s.right));
      pen = true;
      if (s.dots) ctx.fillRect(px(x) - 2, py(y, s.right) - 2, 4, 4);
    });
    ctx.stroke();
  }
  if (opts.zero) {
    ctx.strokeStyle = "#ddd";
    ctx.beginPath();
    ctx.moveTo(pad, py(0));
    ctx.lineTo(w - pad, py(0));
    ctx.stroke();
  }
}

let surface = null;

function solve() {
  const r = JSON.parse(solve_example(num("s-which"), $("s-mode").value, num("s-star"), num("s-power"), num("s-tfinal")));
  if (r.error) { $("s-msg").textContent = r.error; surface = null; return; }
  surface = r;
  $("s-msg").textContent = r.stopped ?? "";
  $("s-level").max = r.levels.length - 1;
  $("s-level").value = r.levels.length - 1;
  drawLevel();
}

function drawLevel() {
  if (!surface) return;
  const lvl = surface.levels[Math.min(num("s-level"), surface.levels.length - 1)];
  $("s-time").textContent = `t = ${lvl.t.toFixed(3)}`;
  const logErr = lvl.error.map((e) => (e === null ? null : Math.log10(Math.max(e, 1e-17))));
  frame($("s-canvas"), surface.x, [
    { ys: lvl.numeric, color: "#1f77b4", dots: true },
    { ys: lvl.exact, color: "#d62728" },
    { ys: logErr, color: "#2ca02c", right: true, dots: true },
  ]);
}

function weights() {
  const r = JSON.parse(stencil_weights(num("w-center"), num("w-alpha"), num("w-star"), num("w-power"), $("w-printed").checked));
  if (r.error) { $("w-msg").textContent = r.error; return; }
  $("w-msg").textContent = `center x = ${r.center_x}; members ${r.members.join(", ")}`;
  const col = (block, k) => block.lambda.map((l) => l[k]);
  const idx = r.members.map((_, i) => i);
  frame($("w-canvas"), idx, [
    { ys: col(r.integer, 0), color: "#1f77b4", bars: { index: 0, of: 4 } },
    { ys: col(r.integer, 1), color: "#ff7f0e", bars: { index: 1, of: 4 } },
    { ys: col(r.fractional, 0), color: "#9467bd", bars: { index: 2, of: 4 } },
    { ys: col(r.fractional, 1), color: "#8c564b", bars: { index: 3, of: 4 } },
  ], { zero: true });
}

function phi() {
  const r = JSON.parse(phi_curves($("p-f1").value, num("p-p1"), $("p-f2").value, num("p-p2"), num("p-alpha"), num("p-dt"), 200));
  if (r.error) { $("p-msg").textContent = r.error; return; }
  const gaps = r.combined.filter((v) => v === null).length;
  $("p-msg").textContent = gaps ? `${gaps} samples where a family is not positive` : "";
  frame($("p-canvas"), r.dt, [
    { ys: r.dt, color: "#999" },
    { ys: r.first, color: "#1f77b4" },
    { ys: r.second, color: "#ff7f0e" },
    { ys: r.combined, color: "#2ca02c" },
  ]);
}

await init();
for (const id of ["s-which", "s-mode", "s-star", "s-power", "s-tfinal"]) $(id).addEventListener("change", solve);
$("s-level").addEventListener("input", drawLevel);
for (const id of ["w-center", "w-alpha", "w-star", "w-power", "w-printed"]) $(id).addEventListener("change", weights);
for (const id of ["p-f1", "p-p1", "p-f2", "p-p2", "p-dt"]) $(id).addEventListener("change", phi);
$("p-alpha").addEventListener("input", phi);
solve();
weights();
phi();
