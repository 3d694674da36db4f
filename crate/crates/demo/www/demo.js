// Built with: wasm-pack build crates/demo --target web --out-dir www/pkg
import init, { invariants, classify, arrangement } from "./pkg/gt_systems_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseInt($(id).value, 10);

function table(headers, rows) {
  const head = "<tr>" + headers.map((h) => `<th>${h}</th>`).join("") + "</tr>";
  const body = rows.map((r) => "<tr>" + r.map((c) => `<td>${c}</td>`).join("") + "</tr>").join("");
  return `<table>${head}${body}</table>`;
}

function guard(out, f) {
  try {
    f();
  } catch (e) {
    out.innerHTML = `<p class="err">${e.message ?? e}</p>`;
  }
}

// Degree-d monomials as points of the triangle x^d, y^d, z^d; invariant ones filled.
function drawTriangle(d, generators) {
  const cv = $("triangle");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const pad = 24, side = cv.width - 2 * pad, h = side * Math.sqrt(3) / 2;
  const pos = (e) => {
    const [i, j, k] = e;
    const x = pad + (j + k / 2) * side / d;
    const y = pad + h - (k * h) / d;
    return [x, y];
  };
  const inv = new Set(generators.map((m) => m.exp.join(",")));
  const r = Math.max(2, Math.min(7, 120 / d));
  for (let i = d; i >= 0; i--) {
    for (let j = d - i; j >= 0; j--) {
      const e = [i, j, d - i - j];
      const [x, y] = pos(e);
      g.beginPath();
      g.arc(x, y, r, 0, 2 * Math.PI);
      if (inv.has(e.join(","))) {
        g.fillStyle = "#c33";
        g.fill();
      } else {
        g.strokeStyle = "#999";
        g.stroke();
      }
    }
  }
  g.fillStyle = "#000";
  g.fillText("x^d", pos([d, 0, 0])[0] - 10, pos([d, 0, 0])[1] + 16);
  g.fillText("y^d", pos([0, d, 0])[0] - 10, pos([0, d, 0])[1] + 16);
  g.fillText("z^d", pos([0, 0, d])[0] - 10, pos([0, 0, d])[1] - 10);
}

function runInvariants() {
  const out = $("inv-out");
  guard(out, () => {
    const d = num("inv-d");
    const v = JSON.parse(invariants(d, num("inv-a"), num("inv-b"), num("inv-c")));
    drawTriangle(d, v.generators);
    const w = v.verdict;
    out.innerHTML =
      `<p>μ = ${v.mu}: ${v.generators.map((m) => m.display).join(", ")}</p>` +
      table(["rank of ×(x+y+z)", "source", "kernel", "Togliatti", "GT"],
        [[w.rank, w.dim_source, w.kernel_dim, w.is_togliatti, w.is_gt]]);
  });
}

function runClassify() {
  const out = $("cls-out");
  guard(out, () => {
    const v = JSON.parse(classify(num("cls-d")));
    const rows = v.classes.map((c) => [c.type, c.size, "(" + c.members.join(",") + ")"]);
    const n = v.counts;
    out.innerHTML = table(["type", "size", "members"], rows) +
      `<p>N2 = ${n.N2}, N3 = ${n.N3}, N4 = ${n.N4}, N6 = ${n.N6}; ${n.total} classes</p>`;
  });
}

function runArrangement() {
  const out = $("arr-out");
  guard(out, () => {
    const v = JSON.parse(arrangement($("arr-kind").value, num("arr-d")));
    const exps = Array.isArray(v.exponents) ? `(${v.exponents.join(", ")})` : v.exponents;
    out.innerHTML = `<p>${v.lines} lines, c1 = ${v.c1}, c2 = ${v.c2}, exponents ${exps}</p>` +
      table(["multiplicity", "points"], v.census.map((c) => [c.mult, c.count]));
  });
}

await init();
$("inv-go").onclick = runInvariants;
$("cls-go").onclick = runClassify;
$("arr-go").onclick = runArrangement;
runInvariants();
