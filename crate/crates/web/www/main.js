import init, { analyzePoem, rhymeLines, scoreLine } from "./pkg/metrum_web.js";

const $ = (id) => document.getElementById(id);

function escape(s) {
  return String(s).replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out;
}

function show(target, render) {
  try {
    $(target).innerHTML = render();
  } catch (e) {
    $(target).innerHTML = `<p class="error">${escape(e.message)}</p>`;
  }
}

function fmt(x) {
  return x.toFixed(3);
}

function renderPoem() {
  const p = call(analyzePoem, $("poem").value);
  const means = Object.entries(p.template_means)
    .map(([m, v]) => `${m} ${fmt(v)}`)
    .join(", ");
  const scheme = p.rhyme_scheme || "";
  const rows = p.lines
    .map((l, i) => {
      const cls = l.technicality < 0.9 ? "score low" : "score";
      const flag = l.low_confidence ? " (short)" : "";
      return `<tr><td>${escape(scheme[i] || "")}</td><td>${escape(l.marked)}</td>` +
        `<td>${escape(l.meter)}${flag}</td><td class="${cls}">${fmt(l.technicality)}</td></tr>`;
    })
    .join("");
  return `<p><b>${escape(p.meter)}</b>, technicality ${fmt(p.technicality)}, rhyme scheme <code>${escape(scheme)}</code></p>` +
    `<p><small>Mean line score per meter: ${escape(means)}</small></p>` +
    `<table><tr><th></th><th>Line</th><th>Meter</th><th>Score</th></tr>${rows}</table>`;
}

function renderRhyme() {
  const r = call(rhymeLines, $("rhyme-a").value, $("rhyme-b").value);
  return `<table><tr><th>Ending</th><th>Phones</th></tr>` +
    `<tr><td>first</td><td><code>${escape(r.a)}</code></td></tr>` +
    `<tr><td>second</td><td><code>${escape(r.b)}</code></td></tr></table>` +
    `<p>Score <b class="score">${fmt(r.score)}</b>: ${r.rhymes ? "rhyme" : "no rhyme"}</p>`;
}

function renderLine() {
  const w = ["w-off", "w-mono", "w-miss"].map((id) => {
    const v = parseFloat($(id).value);
    $(`${id}-v`).textContent = v.toFixed(1);
    return v;
  });
  const r = call(scoreLine, $("line").value, $("meter").value, ...w);
  return `<p>${escape(r.marked)}</p>` +
    `<p><code>${escape(r.pattern)}</code> score <b class="score">${fmt(r.score)}</b></p>` +
    `<p><small>${r.strong_positions} strong positions; ${r.off_ictus} off-beat stresses, ` +
    `${r.off_ictus_mono} off-beat monosyllables, ${r.avoidable_miss} avoidable misses</small></p>`;
}

await init();
$("status").textContent = "Stress, meter and rhyme for Russian verse, computed in the browser.";
$("analyze").addEventListener("click", () => show("poem-out", renderPoem));
$("rhyme").addEventListener("click", () => show("rhyme-out", renderRhyme));
for (const id of ["line", "meter", "w-off", "w-mono", "w-miss"]) {
  $(id).addEventListener("input", () => show("line-out", renderLine));
}
show("poem-out", renderPoem);
show("rhyme-out", renderRhyme);
show("line-out", renderLine);
