// Wires the page to the wasm exports in pkg/ (built with wasm-bindgen --target web).
import init, { classify, random_polygon, targets } from "./pkg/cyclogon_demo.js";

const $ = (id) => document.getElementById(id);
const SIZE = 400, SCALE = 160;

// Circle and dots only, for inputs the classifier rejects.
function placeholder(points) {
  const dots = points
    .map(([x, y]) => `<circle cx="${SIZE / 2 + SCALE * x}" cy="${SIZE / 2 - SCALE * y}" r="3.5"/>`)
    .join("");
  return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${SIZE} ${SIZE}">` +
    `<circle cx="${SIZE / 2}" cy="${SIZE / 2}" r="${SCALE}" fill="none" stroke="#bbb"/>${dots}</svg>`;
}

function currentVertices() {
  try {
    const doc = JSON.parse($("input").value);
    return Array.isArray(doc.vertices) ? doc.vertices : null;
  } catch {
    return null;
  }
}

function setVertices(vs) {
  $("input").value = JSON.stringify({ vertices: vs });
  run();
}

function run() {
  $("error").textContent = "";
  $("details").textContent = "";
  try {
    const r = JSON.parse(classify($("input").value, Number($("eps").value)));
    $("diagram").innerHTML = r.svg;
    $("verdict").textContent = `${r.verdict}, w = ${r.winding}`;
    $("verdict").className = r.convex ? "convex" : "non-convex";
    const lines = [`thetas: ${r.thetas.map((t) => t.toFixed(6)).join(" ")}`];
    if (r.distinguished_index !== null) lines.push(`distinguished angle: ${r.distinguished_index}`);
    if (r.certificate) {
      const c = r.certificate;
      lines.push(
        `pattern ${c.pattern} after shift ${c.shift}${c.reversed ? " and reversal" : ""}`,
        `witness edge ${c.edge}, vertices ${c.vertices[0]} and ${c.vertices[1]}`,
        `determinants ${c.delta_j.toExponential(4)} and ${c.delta_k.toExponential(4)}`,
        `product ${c.product.toExponential(4)}`,
      );
    }
    $("details").textContent = lines.join("\n");
  } catch (e) {
    $("verdict").textContent = "";
    $("error").textContent = e.message ?? String(e);
    $("diagram").innerHTML = placeholder(currentVertices() ?? []);
  }
}

function addVertexAt(event) {
  const box = $("diagram").getBoundingClientRect();
  const x = ((event.clientX - box.left) * SIZE) / box.width;
  const y = ((event.clientY - box.top) * SIZE) / box.height;
  const angle = Math.atan2((SIZE / 2 - y) / SCALE, (x - SIZE / 2) / SCALE);
  const vs = currentVertices() ?? [];
  vs.push([Math.cos(angle), Math.sin(angle)]);
  setVertices(vs);
}

await init();

for (const t of JSON.parse(targets())) {
  const opt = document.createElement("option");
  opt.value = t.label;
  opt.textContent = `${t.label} (${t.convex ? "convex" : "non-convex"}, n >= ${t.min_vertices})`;
  $("target").append(opt);
}

$("classify").addEventListener("click", run);
$("diagram").addEventListener("click", addVertexAt);
$("clear").addEventListener("click", () => setVertices([]));
$("undo").addEventListener("click", () => setVertices((currentVertices() ?? []).slice(0, -1)));
$("random").addEventListener("click", () => {
  try {
    $("input").value = random_polygon($("target").value, Number($("n").value), Number($("seed").value));
    run();
  } catch (e) {
    $("error").textContent = e.message ?? String(e);
  }
});

run();
