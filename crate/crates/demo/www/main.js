import init, { walsh_profile, kloosterman_profile, ratio_curve } from "./pkg/prsbox_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function call(f, ...args) {
  try {
    return JSON.parse(f(...args));
  } catch (e) {
    throw new Error(typeof e === "string" ? e : e.message);
  }
}

function showError(where, e) {
  $(where).innerHTML = `<p class="error">${e.message}</p>`;
}

function drawHeat(profile) {
  const canvas = $("heat");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const p = profile.p;
  if (profile.grid.length === 0) {
    ctx.fillText(`heat map only for p <= 257`, 10, 20);
    return;
  }
  // the a = 0, b = 0 cell is the trivial value; scale by the largest other cell
  let top = 0;
  for (let i = 1; i < profile.grid.length; i++) top = Math.max(top, profile.grid[i]);
  const img = ctx.createImageData(p, p);
  for (let i = 0; i < p * p; i++) {
    const t = Math.min(1, profile.grid[i] / (top || 1));
    img.data[4 * i] = 255 * Math.min(1, 2 * t);
    img.data[4 * i + 1] = 255 * Math.max(0, 2 * t - 1);
    img.data[4 * i + 2] = 80 * (1 - t);
    img.data[4 * i + 3] = 255;
  }
  const off = new OffscreenCanvas(p, p);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  const mixed = profile.cases.find((c) => c.case === "mixed");
  if (mixed) {
    const s = canvas.width / p;
    ctx.strokeStyle = "#00e5ff";
    ctx.lineWidth = 2;
    ctx.strokeRect(mixed.b * s - 2, mixed.a * s - 2, s + 4, s + 4);
  }
}

function showProfile(profile) {
  $("summary").innerHTML =
    `<p><b>${profile.family}</b>, p = ${profile.p}, m = ${profile.m}, ` +
    `max correlation ${profile.correlation.toFixed(6)}</p>`;
  const rows = profile.cases
    .map((c) => `<tr><td>${c.case}</td><td>${c.max_abs.toFixed(6)}</td><td>(${c.a}, ${c.b})</td>` +
      `<td>${c.bound.toFixed(6)}</td><td>${c.ratio.toFixed(4)}</td><td>${c.formula}</td></tr>`)
    .join("");
  $("cases").innerHTML =
    `<table><tr><th>case</th><th>max</th><th>witness</th><th>bound</th><th>ratio</th><th>formula</th></tr>${rows}</table>`;
  drawHeat(profile);
}

function drawCurve(curve) {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 40;
  ctx.clearRect(0, 0, W, H);
  const pts = curve.points;
  if (pts.length === 0) {
    $("curve-note").textContent = "no primes in range where the family is defined";
    return;
  }
  const pmin = pts[0].p, pmax = pts[pts.length - 1].p;
  const x = (p) => pad + ((p - pmin) / Math.max(1, pmax - pmin)) * (W - 2 * pad);
  const y = (r) => H - pad - Math.min(r, 1.1) / 1.1 * (H - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad - 10); ctx.lineTo(pad, H - pad); ctx.lineTo(W - pad, H - pad);
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.fillText("max / bound", 4, pad - 16);
  ctx.fillText(`p = ${pmin}`, pad, H - pad + 16);
  ctx.fillText(`p = ${pmax}`, W - pad - 40, H - pad + 16);
  for (const r of [0.5, 1]) {
    ctx.strokeStyle = r === 1 ? "#d33" : "#eee";
    ctx.beginPath(); ctx.moveTo(pad, y(r)); ctx.lineTo(W - pad, y(r)); ctx.stroke();
    ctx.fillText(String(r), pad - 24, y(r) + 4);
  }
  ctx.fillStyle = "#1565c0";
  for (const pt of pts) ctx.fillRect(x(pt.p) - 1.5, y(pt.ratio) - 1.5, 3, 3);
  const best = pts.reduce((a, b) => (b.ratio > a.ratio ? b : a));
  $("curve-note").textContent =
    `${pts.length} primes, ${curve.skipped.length} skipped; largest ratio ${best.ratio.toFixed(6)} at p = ${best.p}`;
}

await init();

$("w-run").onclick = () => {
  try { showProfile(call(walsh_profile, $("w-family").value, num("w-p"), num("w-seed"))); }
  catch (e) { showError("cases", e); }
};
$("k-run").onclick = () => {
  try { showProfile(call(kloosterman_profile, num("k-p"), num("k-m"), num("k-e"))); }
  catch (e) { showError("cases", e); }
};
$("c-run").onclick = () => {
  try { drawCurve(call(ratio_curve, $("c-family").value, num("c-lo"), num("c-hi"), $("c-case").value)); }
  catch (e) { $("curve-note").innerHTML = `<span class="error">${e.message}</span>`; }
};
$("w-run").onclick();
