// Plain-JS front end for the wasm module: three canvases, no frameworks.

import init, { orbit_json, bounds_json, cantor_json } from "./pkg/badform_web.js";

const $ = (id) => document.getElementById(id);

function clearCanvas(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function axes(ctx, box, xlab, ylab) {
  ctx.strokeStyle = "#9aa3b5";
  ctx.lineWidth = 1;
  ctx.strokeRect(box.x, box.y, box.w, box.h);
  ctx.fillStyle = "#66718a";
  ctx.font = "12px system-ui";
  ctx.fillText(xlab, box.x + box.w - ctx.measureText(xlab).width, box.y + box.h + 16);
  ctx.fillText(ylab, box.x, box.y - 6);
}

// ---- orbit profile ---------------------------------------------------------

function drawOrbit(doc) {
  const canvas = $("orbit-canvas");
  const ctx = clearCanvas(canvas);
  const box = { x: 50, y: 20, w: canvas.width - 70, h: canvas.height - 60 };
  const t = doc.t, delta = doc.delta;
  const tMax = t[t.length - 1];
  const yMin = Math.min(doc.eps, doc.min_delta) * 0.8;
  const yMax = Math.max(1.05, Math.max(...delta) * 1.02);
  const sx = (v) => box.x + (v / tMax) * box.w;
  // log scale for delta
  const sy = (v) => box.y + box.h - ((Math.log(v) - Math.log(yMin)) / (Math.log(yMax) - Math.log(yMin))) * box.h;
  axes(ctx, box, "t", "delta(t), log scale");

  // threshold line
  ctx.strokeStyle = "#dc2626";
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  ctx.moveTo(box.x, sy(doc.eps));
  ctx.lineTo(box.x + box.w, sy(doc.eps));
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#dc2626";
  ctx.fillText(`eps = ${doc.eps.toFixed(6)}`, box.x + 8, sy(doc.eps) - 5);

  // profile
  ctx.strokeStyle = "#2563eb";
  ctx.lineWidth = 1.4;
  ctx.beginPath();
  for (let i = 0; i < t.length; i++) {
    const x = sx(t[i]), y = sy(Math.max(delta[i], yMin));
    if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
  }
  ctx.stroke();

  if (doc.verdict.type === "enters") {
    const x = sx(doc.verdict.t);
    ctx.strokeStyle = "#dc2626";
    ctx.beginPath();
    ctx.moveTo(x, box.y);
    ctx.lineTo(x, box.y + box.h);
    ctx.stroke();
  }
}

async function runOrbit() {
  const verdictEl = $("orbit-verdict");
  verdictEl.textContent = "computing...";
  verdictEl.className = "verdict";
  try {
    const tMax = Number($("orbit-tmax").value);
    const doc = JSON.parse(orbit_json($("orbit-entries").value, Number($("orbit-c").value), tMax, 0.01));
    drawOrbit(doc);
    if (doc.verdict.type === "enters") {
      verdictEl.textContent = `enters the cusp at t = ${doc.verdict.t.toFixed(3)}`;
      verdictEl.className = "verdict enters";
    } else {
      verdictEl.textContent = `avoids the cusp up to t = ${tMax}`;
      verdictEl.className = "verdict avoids";
    }
    $("orbit-stat").textContent =
      `min delta = ${doc.min_delta.toFixed(9)}; squared it is the best quality seen: ${Math.pow(doc.min_delta, doc.m + doc.n).toFixed(9)}`;
  } catch (e) {
    verdictEl.textContent = String(e);
    verdictEl.className = "verdict enters";
  }
}

// ---- bound curves ----------------------------------------------------------

function drawBounds(doc) {
  const canvas = $("bounds-canvas");
  const ctx = clearCanvas(canvas);
  const box = { x: 50, y: 20, w: canvas.width - 70, h: canvas.height - 60 };
  const mn = doc.m * doc.n;
  const xs = doc.c.map(Math.log10);
  const xMin = Math.min(...xs), xMax = Math.max(...xs);
  const yMin = Math.min(...doc.lower) - 0.02, yMax = mn + 0.01;
  const sx = (v) => box.x + ((v - xMin) / (xMax - xMin)) * box.w;
  const sy = (v) => box.y + box.h - ((v - yMin) / (yMax - yMin)) * box.h;
  axes(ctx, box, "log10 c", "dimension");

  const line = (ys, color) => {
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    ys.forEach((v, i) => {
      const x = sx(xs[i]), y = sy(v);
      if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    });
    ctx.stroke();
  };
  // shaded band between the bounds
  ctx.fillStyle = "rgba(37, 99, 235, 0.08)";
  ctx.beginPath();
  doc.upper.forEach((v, i) => { const x = sx(xs[i]), y = sy(v); if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y); });
  for (let i = doc.lower.length - 1; i >= 0; i--) ctx.lineTo(sx(xs[i]), sy(doc.lower[i]));
  ctx.closePath();
  ctx.fill();
  line(doc.upper, "#2563eb");
  line(doc.lower, "#059669");
  if (doc.benchmark && doc.benchmark.some((v) => v !== null)) {
    ctx.fillStyle = "#dc2626";
    doc.benchmark.forEach((v, i) => {
      if (v !== null) { ctx.beginPath(); ctx.arc(sx(xs[i]), sy(v), 2.2, 0, 7); ctx.fill(); }
    });
    ctx.fillText("bounded-quotient benchmark", box.x + 8, box.y + 14);
  }
}

function runBounds() {
  try {
    const doc = JSON.parse(bounds_json(
      Number($("bounds-m").value), Number($("bounds-n").value),
      Number($("bounds-k1").value), Number($("bounds-k2").value),
      -6, -0.5, 120));
    drawBounds(doc);
    $("bounds-stat").textContent = `decay exponent p(m, n) = ${doc.p_exponent}`;
  } catch (e) {
    $("bounds-stat").textContent = String(e);
  }
}

// ---- cantor subdivision ----------------------------------------------------

function drawCantor(doc) {
  const canvas = $("cantor-canvas");
  const ctx = clearCanvas(canvas);
  const levels = doc.levels;
  const d = doc.d;
  if (d === 2) {
    // draw the deepest stored level's squares inside the unit square
    const box = { x: 240, y: 10, w: 460, h: 460 };
    axes(ctx, box, "", "");
    const colors = ["#dbeafe", "#93c5fd", "#3b82f6", "#1d4ed8"];
    levels.forEach((level, li) => {
      const side = level.side;
      ctx.fillStyle = colors[Math.min(li, colors.length - 1)];
      level.centers.forEach(([cx, cy]) => {
        const px = box.x + (cx - side / 2 + 0.05) / 1.1 * box.w;
        const py = box.y + (cy - side / 2 + 0.05) / 1.1 * box.h;
        const pw = side / 1.1 * box.w;
        ctx.globalAlpha = li === levels.length - 1 ? 0.95 : 0.35;
        ctx.fillRect(px, py, pw, side / 1.1 * box.h);
      });
    });
    ctx.globalAlpha = 1;
  } else {
    // one horizontal bar per level
    const box = { x: 40, y: 20, w: canvas.width - 80, h: canvas.height - 60 };
    axes(ctx, box, "position", "level");
    const rows = levels.length;
    levels.forEach((level, li) => {
      const side = level.side;
      const y = box.y + (li + 0.15) * (box.h / rows);
      const h = 0.7 * (box.h / rows);
      ctx.fillStyle = "#2563eb";
      level.centers.forEach(([cx]) => {
        const px = box.x + (cx - side / 2 + 0.05) / 1.1 * box.w;
        ctx.fillRect(px, y, Math.max(side / 1.1 * box.w, 1), h);
      });
    });
  }
}

function runCantor() {
  $("cantor-stat").textContent = "building...";
  try {
    const d = Number($("cantor-d").value);
    const invBeta = Number($("cantor-invbeta").value);
    const depth = Number($("cantor-depth").value);
    const simplex = $("cantor-simplex").checked;
    // keep 2d trees affordable in the browser
    const limit = d === 2 && depth >= 3 ? 4 : 0;
    const doc = JSON.parse(cantor_json(d, invBeta, depth, simplex, limit));
    drawCantor(doc);
    $("cantor-stat").textContent =
      `min kept children = ${doc.min_kept} (guarantee ${Math.max(0, Math.ceil(doc.kept_bound_weak))}); ` +
      `stored nodes per level: ${doc.levels.map((l) => l.stored_nodes).join(", ")}`;
  } catch (e) {
    $("cantor-stat").textContent = String(e);
  }
}

// ---- wiring ----------------------------------------------------------------

await init();
$("orbit-run").addEventListener("click", runOrbit);
$("bounds-run").addEventListener("click", runBounds);
$("cantor-run").addEventListener("click", runCantor);
$("orbit-tmax").addEventListener("input", () => { $("orbit-tmax-val").textContent = $("orbit-tmax").value; });
$("cantor-invbeta").addEventListener("input", () => { $("cantor-invbeta-val").textContent = $("cantor-invbeta").value; });
runOrbit();
runBounds();
runCantor();
