import init, { lauricella_curve, moment_table, watson_convergence } from "./pkg/dirichlet_moments_web.js";

const $ = (id) => document.getElementById(id);

function guarded(errBox, f) {
  return () => {
    $(errBox).textContent = "";
    try {
      f();
    } catch (e) {
      $(errBox).textContent = String(e.message ?? e);
    }
  };
}

// Scatter plot of several series sharing one x axis; null values are skipped.
function plot(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flatMap((s) => s.values).filter((v) => v !== null && Number.isFinite(v));
  if (ys.length === 0) return;
  let [lo, hi] = [Math.min(...ys), Math.max(...ys)];
  if (lo === hi) { lo -= 1; hi += 1; }
  const [x0, x1] = [xs[0], xs[xs.length - 1]];
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - lo) / (hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(4), 2, pad + 4);
  ctx.fillText(lo.toPrecision(4), 2, h - pad);
  ctx.fillText(String(x0), pad, h - pad + 14);
  ctx.fillText(String(x1), w - pad - 20, h - pad + 14);
  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    s.values.forEach((y, i) => {
      if (y === null || !Number.isFinite(y)) return;
      const [cx, cy] = [px(xs[i]), py(y)];
      ctx.beginPath();
      if (s.mark === "dot") { ctx.arc(cx, cy, 3, 0, 2 * Math.PI); ctx.fill(); }
      else if (s.mark === "ring") { ctx.arc(cx, cy, 5, 0, 2 * Math.PI); ctx.stroke(); }
      else { ctx.moveTo(cx - 4, cy); ctx.lineTo(cx + 4, cy); ctx.moveTo(cx, cy - 4); ctx.lineTo(cx, cy + 4); ctx.stroke(); }
    });
  }
}

function runLauricella() {
  const out = JSON.parse(lauricella_curve(
    $("lj").value, $("lbeta").value, Number($("lgamma").value), $("lrest").value,
    Number($("llo").value), Number($("lhi").value), 60,
  ));
  plot($("lplot"), out.x, [
    { values: out.curves.series, color: "#1f77b4", mark: "dot" },
    { values: out.curves.moments, color: "#d62728", mark: "ring" },
    { values: out.curves.recurrence, color: "#2ca02c", mark: "plus" },
  ]);
  const notes = Object.entries(out.notes).map(([m, e]) => `${m}: ${e}`).join("\n");
  $("lerr").textContent = notes;
}

function runTable() {
  const out = JSON.parse(moment_table($("mknots").value, $("mparams").value, Number($("morder").value)));
  const rows = out.rows
    .map((r) => `<tr><td>${r.beta}</td><td>${r.value.toPrecision(15)}</td><td>${r.strategy}</td><td>${r.table_size}</td></tr>`)
    .join("");
  $("mout").innerHTML = `<table><tr><th>β</th><th>m<sub>β</sub></th><th>strategy</th><th>table size</th></tr>${rows}</table>`;
}

function runWatson() {
  const out = JSON.parse(watson_convergence(
    $("wknots").value, $("wparams").value, $("wlambda").value, Number($("worder").value),
  ));
  const last = out.partial_sums[out.partial_sums.length - 1];
  $("wsummary").textContent = `product ${out.product}, last partial sum ${last}`;
  const logs = out.residuals.map((r) => (r > 0 ? Math.log10(r) : null));
  plot($("wplot"), out.residuals.map((_, i) => i), [{ values: logs, color: "#1f77b4", mark: "dot" }]);
}

await init();
$("lrun").onclick = guarded("lerr", runLauricella);
$("mrun").onclick = guarded("merr", runTable);
$("wrun").onclick = guarded("werr", runWatson);
guarded("lerr", runLauricella)();
guarded("merr", runTable)();
guarded("werr", runWatson)();
