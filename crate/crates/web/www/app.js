import init, { analyze_graph, random_parents, compare_trees } from "./pkg/twtree_web.js";

const $ = (id) => document.getElementById(id);
const PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                 "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"];
const SVG = "http://www.w3.org/2000/svg";

function el(name, attrs) {
  const node = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function draw(report, edges) {
  const levels = report.levels;
  const width = Math.max(320, 48 * Math.max(...levels.map((l) => l.length)));
  const height = 70 * levels.length + 20;
  const pos = {};
  levels.forEach((level, i) => {
    level.forEach((v, k) => { pos[v] = [((k + 1) * width) / (level.length + 1), 40 + 70 * i]; });
  });
  const color = {};
  (report.orbits || []).forEach((orbit, k) => orbit.forEach((v) => { color[v] = PALETTE[k % PALETTE.length]; }));

  const svg = el("svg", { width, height });
  for (const [u, v] of edges) {
    const [x1, y1] = pos[u];
    const [x2, y2] = pos[v];
    svg.append(el("line", { x1, y1, x2, y2, stroke: y1 === y2 ? "#b00" : "#555" }));
  }
  for (const [v, [cx, cy]] of Object.entries(pos)) {
    svg.append(el("circle", { cx, cy, r: 14, fill: color[v] || "#fff", stroke: "#333" }));
    const label = el("text", { x: cx, y: cy + 4, "text-anchor": "middle", "font-size": 11 });
    label.textContent = v;
    svg.append(label);
  }
  $("drawing").replaceChildren(svg);
}

function summarize(r) {
  const lines = [
    `tree: ${r.flags.is_tree}` + (r.witness ? `  witness: ${JSON.stringify(r.witness)}` : ""),
    `dim W0 = ${r.dims.W0 ?? "-"}   dim T = ${r.dims.T ?? "-"}   n^2 = ${r.dims.n2}`,
    `H trivial: ${r.flags.H_trivial ?? "-"}   T full: ${r.flags.T_full ?? "-"}`,
  ];
  if (r.aut_order) lines.push(`|Aut| = ${r.aut_order}`);
  if (r.classes) r.classes.forEach((level, i) => lines.push(`classes at level ${i}: ${JSON.stringify(level)}`));
  if (r.certificate) lines.push(`certificate: ${r.certificate}`);
  return lines.join("\n");
}

function analyze() {
  try {
    const out = JSON.parse(analyze_graph($("input").value, $("format").value, Number($("root").value), Number($("cap").value)));
    draw(out.report, out.edges);
    $("summary").className = "";
    $("summary").textContent = summarize(out.report);
  } catch (e) {
    $("drawing").replaceChildren();
    $("summary").className = "err";
    $("summary").textContent = String(e.message || e);
  }
}

function compare() {
  try {
    const r = JSON.parse(compare_trees($("tree-a").value, $("tree-b").value, "parents"));
    $("iso").className = "";
    $("iso").textContent = `${r.isomorphic ? "ISO" : "NON-ISO"}\n${r.a}\n${r.b}`;
  } catch (e) {
    $("iso").className = "err";
    $("iso").textContent = String(e.message || e);
  }
}

await init();
$("analyze").onclick = analyze;
$("compare").onclick = compare;
$("random").onclick = () => {
  $("format").value = "parents";
  $("root").value = 0;
  $("input").value = random_parents(Number($("n").value), Number($("seed").value)).trim();
  analyze();
};
analyze();
