import init, { staircase, orbit_table, step_table } from "./pkg/obook_wasm.js";

const $ = (id) => document.getElementById(id);

function call(f, ...args) {
  try {
    return [JSON.parse(f(...args)), null];
  } catch (e) {
    return [null, String(e)];
  }
}

function table(rows, cols) {
  const head = cols.map((c) => `<th>${c}</th>`).join("");
  const body = rows
    .map((r) => "<tr>" + cols.map((c) => `<td>${r[c] ?? "-"}</td>`).join("") + "</tr>")
    .join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function drawStaircase() {
  const bend = +$("bend").value;
  $("bend-val").textContent = (bend / 1000).toFixed(3);
  const [res, err] = call(staircase, +$("samples").value, bend, +$("maxq").value);
  const cv = $("stair");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  if (err) {
    $("stair-info").innerHTML = `<span class="err">${err}</span>`;
    return;
  }
  const pad = 20;
  const w = cv.width - 2 * pad;
  const h = cv.height - 2 * pad;
  g.strokeStyle = "#ddd";
  g.strokeRect(pad, pad, w, h);
  const n = res.points.length;
  let exact = 0;
  for (const p of res.points) {
    const x = pad + p.t * w;
    const y0 = pad + h - p.lo * h;
    const y1 = pad + h - p.hi * h;
    if (p.exact !== null) {
      exact++;
      g.fillStyle = "#1a4d8f";
      g.fillRect(x, y0 - 1, Math.max(1, w / n), 2);
    } else {
      g.fillStyle = "#9bb8dd";
      g.fillRect(x, y1 - 1, Math.max(1, w / n), Math.max(2, y0 - y1));
    }
  }
  $("stair-info").textContent = `${exact} of ${n} parameters have an exact rational rotation number`;
}

function runOrbits() {
  const [res, err] = call(orbit_table, $("matrix").value, +$("period").value);
  if (err) {
    $("orbits").innerHTML = `<span class="err">${err}</span>`;
    return;
  }
  const lam = res.dilatation
    ? `dilatation in [${res.dilatation.lo.toFixed(10)}, ${res.dilatation.hi.toFixed(10)}]`
    : "dilatation not certified";
  const cols = ["period", "periodic_points", "simple"].concat(res.signed ? ["good"] : []);
  $("orbits").innerHTML = `<p>${lam}</p>` + table(res.rows, cols);
}

function drawSteps() {
  const [res, err] = call(step_table, +$("sides").value);
  const cv = $("steps");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  if (err) {
    $("step-table").innerHTML = `<span class="err">${err}</span>`;
    return;
  }
  const s = res.sides;
  const mid = cv.height / 2;
  const scale = (mid - 10) / 3;
  const bw = cv.width / res.steps.length;
  g.strokeStyle = "#999";
  g.beginPath();
  g.moveTo(0, mid);
  g.lineTo(cv.width, mid);
  g.stroke();
  res.steps.forEach((st, k) => {
    g.fillStyle = st.value >= 0 ? "#2b7a3d" : "#a33";
    const hgt = st.value * scale;
    g.fillRect(k * bw + 1, mid - Math.max(hgt, 0), bw - 2, Math.abs(hgt));
  });
  $("step-table").innerHTML = table(res.steps, ["i", "phi"]) + `<p>${s}-gon, values 3 - 6i/${s}</p>`;
}

await init();
for (const id of ["bend", "samples", "maxq"]) $(id).addEventListener("input", drawStaircase);
$("run-orbits").addEventListener("click", runOrbits);
$("sides").addEventListener("input", drawSteps);
drawStaircase();
runOrbits();
drawSteps();
