"use strict";
// Minimal client for the line-delimited JSON protocol.
const state = { order: [], profiles: new Map(), epoch: 0, open: new Set(), pinned: new Set() };
let nextId = 1;
const $ = (id) => document.getElementById(id);
const ws = new WebSocket(`${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`);
const send = (msg) => { msg.id = nextId++; ws.send(JSON.stringify(msg)); };

ws.onopen = () => { $("status").textContent = "live"; send({ type: "subscribe" }); };
ws.onclose = () => { $("status").textContent = "disconnected"; };
ws.onmessage = (ev) => ev.data.split("\n").filter(Boolean).forEach((l) => apply(JSON.parse(l)));

function log(text, cls) {
  const div = document.createElement("div");
  if (cls) div.className = cls;
  div.textContent = text;
  $("scrollback").appendChild(div);
  $("scrollback").scrollTop = 1e9;
}

function insertAtCursor(text) {
  const el = $("input");
  const at = el.selectionStart;
  el.value = el.value.slice(0, at) + text + "\n" + el.value.slice(el.selectionEnd);
  el.selectionStart = el.selectionEnd = at + text.length + 1;
  el.focus();
}

function apply(msg) {
  switch (msg.type) {
    case "profiles":
      if (msg.epoch < state.epoch) return;
      state.epoch = msg.epoch;
      state.order = msg.order;
      for (const p of msg.profiles) state.profiles.set(p.table_name, p);
      for (const name of [...state.profiles.keys()]) if (!msg.order.includes(name)) state.profiles.delete(name);
      break;
    case "removed":
      msg.names.forEach((n) => state.profiles.delete(n));
      state.order = state.order.filter((n) => !msg.names.includes(n));
      break;
    case "order":
      state.order = msg.order;
      state.pinned = new Set(msg.pinned);
      break;
    case "exec_result":
      if (msg.error) log(`${msg.error.kind}: ${msg.error.message}`, "err");
      else log(`ok (epoch ${msg.epoch})${msg.changed.length ? ": " + msg.changed.join(", ") : ""}`);
      msg.plots.forEach((p) => state.open.add(p.table));
      break;
    case "snippet":
      insertAtCursor(msg.text);
      return;
    case "error":
      log(`${msg.kind}: ${msg.message}`, "err");
      return;
    default:
      return;
  }
  render();
}

function bars(values, onClick, title) {
  const max = Math.max(1, ...values);
  const w = 380 / Math.max(1, values.length);
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("width", 380);
  svg.setAttribute("height", 50);
  values.forEach((v, i) => {
    const r = document.createElementNS(ns, "rect");
    const h = (v / max) * 48;
    r.setAttribute("x", i * w);
    r.setAttribute("y", 50 - h);
    r.setAttribute("width", Math.max(1, w - 1));
    r.setAttribute("height", h);
    const t = document.createElementNS(ns, "title");
    t.textContent = title(i);
    r.appendChild(t);
    if (onClick) r.addEventListener("click", () => onClick(i));
    svg.appendChild(r);
  });
  return svg;
}

function exportReq(request) { send({ type: "export", request }); }

function column(table, c) {
  const div = document.createElement("div");
  div.className = "col";
  div.dataset.name = c.name;
  div.onmouseenter = () => document.querySelectorAll(".col").forEach((d) => d.classList.toggle("hl", d.dataset.name === c.name));
  div.onmouseleave = () => document.querySelectorAll(".col.hl").forEach((d) => d.classList.remove("hl"));
  const nulls = (c.null_fraction * 100).toFixed(1);
  const head = document.createElement("div");
  head.innerHTML = `<b></b> <span class="meta">${c.stype}, ${nulls}% null</span>`;
  head.querySelector("b").textContent = c.name;
  div.appendChild(head);
  const body = c.body;
  const t = table.table_name;
  const btn = (label, request) => {
    const b = document.createElement("button");
    b.className = "link";
    b.textContent = label;
    b.onclick = () => exportReq(request);
    return b;
  };
  if (body.kind === "numeric") {
    const h = body.histogram;
    div.appendChild(bars(h.counts, table.temporary ? null : (i) => exportReq({
      kind: "num_range", table: t, column: c.name, lo: h.bin_edges[i], hi: h.bin_edges[i + 1], last_bin: i === h.counts.length - 1,
    }), (i) => `[${h.bin_edges[i]}, ${h.bin_edges[i + 1]}${i === h.counts.length - 1 ? "]" : ")"}: ${h.counts[i]}`));
    const s = body.summary;
    const meta = document.createElement("div");
    meta.className = "meta";
    meta.textContent = s.empty ? "no values" : `min ${s.min} · median ${s.median} · mean ${s.mean.toPrecision(6)} · max ${s.max} · ${s.sortedness} · outliers σ ${s.outliers_sigma} / IQR ${s.outliers_iqr} · +${s.n_pos} 0:${s.n_zero} -${s.n_neg}`;
    div.appendChild(meta);
    if (!table.temporary) {
      div.appendChild(btn("3σ outliers", { kind: "outliers_sigma", table: t, column: c.name }));
      div.appendChild(btn("IQR outliers", { kind: "outliers_iqr", table: t, column: c.name }));
    }
  } else if (body.kind === "categorical") {
    const top = body.top_values;
    div.appendChild(bars(top.map((v) => v.count), table.temporary ? null : (i) => exportReq({
      kind: "cat_value", table: t, column: c.name, value: top[i].value,
    }), (i) => `${top[i].value}: ${top[i].count}`));
    const meta = document.createElement("div");
    meta.className = "meta";
    meta.textContent = `${body.cardinality} distinct · ${body.is_unique ? "unique" : body.duplicate_rows + " duplicate rows"} · length ${body.strlen_min}-${body.strlen_max}`;
    div.appendChild(meta);
    if (!table.temporary && !body.is_unique) div.appendChild(btn("duplicates", { kind: "duplicates", table: t, column: c.name }));
  } else if (body.kind === "temporal") {
    const h = body.histogram;
    const day = (ms) => new Date(ms).toISOString().slice(0, 10);
    div.appendChild(bars(h.counts, null, (i) => `${day(h.bin_edges[i])} – ${day(h.bin_edges[i + 1])}: ${h.counts[i]}`));
    const meta = document.createElement("div");
    meta.className = "meta";
    meta.textContent = body.t_min == null ? "no values" : `${day(body.t_min)} → ${day(body.t_max)} · ${body.sortedness}`;
    div.appendChild(meta);
  }
  if (!table.temporary) div.appendChild(btn("plot", { kind: "plot", table: t, column: c.name }));
  return div;
}

function render() {
  const root = $("profiles");
  root.textContent = "";
  for (const name of state.order) {
    const p = state.profiles.get(name);
    if (!p) continue;
    const sec = document.createElement("section");
    sec.className = "table" + (p.temporary ? " temp" : "");
    const header = document.createElement("header");
    const title = document.createElement("span");
    title.textContent = `${state.pinned.has(name) ? "📌 " : ""}${name} · ${p.nrows} × ${p.ncols}`;
    header.appendChild(title);
    const pin = document.createElement("button");
    pin.className = "link";
    pin.textContent = state.pinned.has(name) ? "unpin" : "pin";
    pin.onclick = (e) => { e.stopPropagation(); send({ type: "pin", table: name, pinned: !state.pinned.has(name) }); };
    header.appendChild(pin);
    header.onclick = () => { state.open.has(name) ? state.open.delete(name) : state.open.add(name); render(); };
    sec.appendChild(header);
    if (state.open.has(name) || p.temporary) p.columns.forEach((c) => sec.appendChild(column(p, c)));
    root.appendChild(sec);
  }
}

function run() {
  const source = $("input").value;
  if (!source.trim()) return;
  log(source, "src");
  send({ type: "exec", source });
  $("input").value = "";
}
$("run").onclick = run;
$("input").addEventListener("keydown", (e) => { if (e.key === "Enter" && (e.ctrlKey || e.metaKey)) { e.preventDefault(); run(); } });
$("reset").onclick = () => send({ type: "reset" });
$("sort").onchange = (e) => send({ type: "sort", mode: e.target.value });
