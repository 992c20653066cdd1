import init, { evaluate, flatness_curve, compare_closed_form } from "./pkg/quantum_plane_web.js";

const $ = (id) => document.getElementById(id);
const mixed = () => parseInt($("mixed").value, 10) || 0;

function show(id, result, pick) {
  const el = $(id);
  const parsed = JSON.parse(result);
  if ("error" in parsed) {
    el.className = "error";
    el.textContent = `exit ${parsed.exit_code}: ${parsed.error}`;
    return null;
  }
  el.className = "";
  el.textContent = pick(parsed.ok);
  return parsed.ok;
}

const SERIES = [
  ["commutator", "#1f77b4"],
  ["connection", "#d62728"],
  ["total", "#2ca02c"],
];

// Log-scale plot of max coefficient magnitude against q0.
function plot(points) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 48;
  ctx.clearRect(0, 0, w, h);

  const finite = points.flatMap((p) =>
    SERIES.map(([k]) => p[k]).filter((v) => typeof v === "number" && v > 0));
  if (points.length === 0 || finite.length === 0) return;
  const xs = points.map((p) => p.q0);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.log10(Math.min(...finite)), Math.log10(Math.max(...finite))];
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (v) => h - pad - ((Math.log10(v) - y0) / (y1 - y0 || 1)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px monospace";
  ctx.fillText(`q0 = ${x0}`, pad, h - pad + 16);
  ctx.fillText(`${x1}`, w - pad - 40, h - pad + 16);
  ctx.fillText(`1e${y1.toFixed(1)}`, 4, pad + 4);
  ctx.fillText(`1e${y0.toFixed(1)}`, 4, h - pad);

  for (const [key, color] of SERIES) {
    ctx.strokeStyle = ctx.fillStyle = color;
    ctx.beginPath();
    let started = false;
    for (const p of points) {
      const v = p[key];
      if (typeof v !== "number" || v <= 0) {
        started = false;
        continue;
      }
      const [px, py] = [sx(p.q0), sy(v)];
      if (started) ctx.lineTo(px, py);
      else ctx.moveTo(px, py);
      started = true;
      ctx.fillRect(px - 2, py - 2, 4, 4);
    }
    ctx.stroke();
  }
}

await init();

$("eval-btn").onclick = () =>
  show("eval-out", evaluate($("expr").value, $("ham").value, $("format").value, mixed()), (s) => s);

$("curv-btn").onclick = () => {
  const ok = show("curv-out",
    flatness_curve($("curv-f").value, $("curv-h").value, $("curv-samples").value, mixed()),
    (r) => r.table);
  plot(ok ? ok.points : []);
};

$("cmp-btn").onclick = () =>
  show("cmp-out", compare_closed_form($("cmp-f").value, mixed()), (r) => r.table);

$("eval-btn").click();
$("curv-btn").click();
$("cmp-btn").click();
