import init, { dimension, family_graph, sample_census } from "./pkg/lampdim_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function el(tag, attrs = {}, text) {
  const ns = ["svg", "line", "circle", "text", "path", "defs", "marker", "title"].includes(tag)
    ? "http://www.w3.org/2000/svg" : null;
  const e = ns ? document.createElementNS(ns, tag) : document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function table(headers, rows) {
  const t = el("table");
  const tr = el("tr");
  headers.forEach((h) => tr.append(el("th", {}, h)));
  t.append(tr);
  for (const r of rows) {
    const row = el("tr");
    r.forEach((c) => row.append(el("td", {}, c === null || c === undefined ? "" : String(c))));
    t.append(row);
  }
  return t;
}

function guarded(out, f) {
  out.replaceChildren();
  try {
    f();
  } catch (e) {
    out.append(el("p", { class: "err" }, String(e)));
  }
}

function runDimension() {
  const out = $("dim-out");
  guarded(out, () => {
    const r = JSON.parse(dimension(num("dim-p"), num("dim-kmax"), num("dim-digits")));
    const side = (name, d) => [name, d.head, d.decimal, d.certified_digits, d.width];
    out.append(table(
      ["method", "head", "value", "certified digits", "width"],
      [side("graph sum", r.graph_sum), side("closed form", r.closed_form)],
    ));
    out.append(el("p", {}, r.intersect
      ? "The enclosures intersect."
      : `The enclosures are disjoint: closed form minus graph sum = ${r.defect}` +
        (r.defect_explained ? ", the k = 1 lacunary term with no matching family." : ".")));
  });
}

const LETTER_COLOURS = { A: "#4e79a7", B: "#f28e2b", C: "#e15759", D: "#76b7b2", F: "#59a14f", I: "#edc948", U: "#bab0ac" };

function drawGraph(r) {
  const byDepth = new Map();
  for (const v of r.vertices) {
    if (!byDepth.has(v.depth)) byDepth.set(v.depth, []);
    byDepth.get(v.depth).push(v);
  }
  const cols = byDepth.size;
  const rows = Math.max(...[...byDepth.values()].map((a) => a.length));
  const dx = 70, dy = 50, pad = 30;
  const w = pad * 2 + Math.max(cols - 1, 0) * dx, h = pad * 2 + Math.max(rows - 1, 0) * dy;
  const pos = new Map();
  for (const [d, vs] of byDepth) {
    vs.forEach((v, i) => pos.set(v.id, [pad + d * dx, pad + (i + (rows - vs.length) / 2) * dy]));
  }
  const svg = el("svg", { width: w, height: h, viewBox: `0 0 ${w} ${h}` });
  const defs = el("defs");
  const marker = el("marker", { id: "arrow", viewBox: "0 0 10 10", refX: 18, refY: 5, markerWidth: 6, markerHeight: 6, orient: "auto" });
  marker.append(el("path", { d: "M0,0 L10,5 L0,10 z", fill: "#888" }));
  defs.append(marker);
  svg.append(defs);
  for (const e of r.edges) {
    const [x1, y1] = pos.get(e.source), [x2, y2] = pos.get(e.target);
    const line = el("line", { x1, y1, x2, y2, stroke: "#888", "marker-end": "url(#arrow)" });
    line.append(el("title", {}, e.label));
    svg.append(line);
  }
  for (const v of r.vertices) {
    const [x, y] = pos.get(v.id);
    const c = el("circle", { cx: x, cy: y, r: 11, fill: LETTER_COLOURS[v.letter] || "#ccc" });
    c.append(el("title", {}, `vertex ${v.id}, piece ${v.piece}`));
    svg.append(c);
    svg.append(el("text", { x, y: y + 4, "text-anchor": "middle" }, v.letter));
  }
  return svg;
}

function runGraph() {
  const out = $("g-out");
  guarded(out, () => {
    const r = JSON.parse(family_graph($("g-kind").value, num("g-k"), num("g-l"), num("g-p")));
    out.append(el("p", {}, `${r.family}: ${r.vertices.length} vertices, ${r.edges.length} edges, ` +
      `kernel dimension ${r.kernel_dim}, measure ${r.mu} (${r.mu_decimal}) at p = ${r.p}`));
    out.append(drawGraph(r));
    if (r.kernel_basis.length) {
      out.append(table(["kernel vector", ...r.vertices.map((v) => `${v.id}${v.letter}`)],
        r.kernel_basis.map((b, i) => [i + 1, ...b])));
    }
  });
}

function runSample() {
  const out = $("mc-out");
  guarded(out, () => {
    const t0 = performance.now();
    const r = JSON.parse(sample_census(num("mc-p"), num("mc-n"), num("mc-seed")));
    const ms = Math.round(performance.now() - t0);
    out.append(el("p", {}, `${r.samples} points in ${ms} ms. Empirical dimension ` +
      `${r.empirical_dimension_decimal.toFixed(5)} ± ${r.dimension_std_error.toFixed(5)}; ` +
      `${r.unknown} unclassified, ${r.cap_exceeded} over the cap.`));
    const rows = [...r.rows].sort((a, b) => b.count - a.count).map((c) => [
      c.family, c.count, c.frequency.toFixed(5),
      c.expected_decimal == null ? "" : c.expected_decimal.toFixed(5),
      c.z == null ? "" : c.z.toFixed(2),
    ]);
    out.append(table(["family", "count", "frequency", "expected", "z"], rows));
  });
}

await init();
$("dim-run").onclick = runDimension;
$("g-run").onclick = runGraph;
$("mc-run").onclick = runSample;
runDimension();
runGraph();
