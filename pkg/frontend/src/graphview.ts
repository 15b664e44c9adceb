/** Community graph view: SVG nodes colored per community, sized by
 * in-degree. Selecting a node shows its aliases and definition.
 * All displayed numbers come verbatim from API payloads.
 */

import type { CommunitiesResponse, GraphView, PatternView } from "./api.js";
import { computeLayout } from "./layout.js";

const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
];

export function communityColor(communityId: number): string {
  return PALETTE[((communityId % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

/** Radius grows with in-degree; strictly monotone so the max-in-degree
 * node is always rendered largest. */
export function nodeRadius(inDegree: number): number {
  return 6 + 3 * Math.sqrt(inDegree);
}

export function renderCommunityView(
  container: HTMLElement,
  graph: GraphView,
  communities: CommunitiesResponse,
  width = 760,
  height = 520,
): void {
  container.innerHTML = "";

  if (graph.patterns.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "The graph is empty — ingest a corpus to begin.";
    container.appendChild(empty);
    return;
  }

  const byId = new Map<string, PatternView>(
    graph.patterns.map((p) => [p.id, p]),
  );
  const communityOf = new Map<string, number>();
  if (communities.detected) {
    for (const c of communities.communities) {
      for (const member of c.members) communityOf.set(member, c.id);
    }
  }

  const legend = document.createElement("div");
  legend.className = "legend";
  if (communities.detected) {
    for (const c of communities.communities) {
      const item = document.createElement("span");
      item.className = "legend-item";
      item.dataset.community = String(c.id);
      const swatch = document.createElement("i");
      swatch.style.background = communityColor(c.id);
      const main = c.main_pattern ? byId.get(c.main_pattern)?.name : null;
      item.append(swatch, ` ${main ?? `community ${c.id}`} (${c.size})`);
      legend.appendChild(item);
    }
  } else {
    legend.textContent = "No detection run yet — press Detect.";
  }
  container.appendChild(legend);

  const svgNS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph-canvas");

  const ids = graph.patterns.map((p) => p.id);
  const layout = computeLayout(
    ids,
    graph.edges.map((e) => ({ src: e.src, dst: e.dst })),
    width,
    height,
  );

  for (const e of graph.edges) {
    const a = layout.get(e.src);
    const b = layout.get(e.dst);
    if (!a || !b) continue;
    const line = document.createElementNS(svgNS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("class", "graph-edge");
    svg.appendChild(line);
  }

  const detail = document.createElement("div");
  detail.className = "node-detail";
  detail.textContent = "Select a node to inspect it.";

  for (const p of graph.patterns) {
    const pos = layout.get(p.id)!;
    const circle = document.createElementNS(svgNS, "circle");
    circle.setAttribute("cx", pos.x.toFixed(1));
    circle.setAttribute("cy", pos.y.toFixed(1));
    circle.setAttribute("r", nodeRadius(p.in_degree).toFixed(2));
    const community = communityOf.get(p.id);
    circle.setAttribute(
      "fill",
      community === undefined ? "#999" : communityColor(community),
    );
    circle.setAttribute("class", "graph-node");
    circle.dataset.id = p.id;
    circle.dataset.inDegree = String(p.in_degree);
    if (community !== undefined) circle.dataset.community = String(community);
    const title = document.createElementNS(svgNS, "title");
    title.textContent = `${p.name} (in-degree ${p.in_degree})`;
    circle.appendChild(title);
    circle.addEventListener("click", () => {
      detail.innerHTML = "";
      const name = document.createElement("h3");
      name.textContent = `${p.name} — in-degree ${p.in_degree}`;
      const def = document.createElement("p");
      def.textContent = p.definition || "(no definition)";
      const aliases = document.createElement("ul");
      aliases.className = "alias-list";
      for (const a of p.aliases) {
        const li = document.createElement("li");
        li.textContent = `${a.original_name} (${a.citation_key})`;
        aliases.appendChild(li);
      }
      detail.append(name, def, aliases);
    });
    svg.appendChild(circle);
  }

  container.appendChild(svg);
  container.appendChild(detail);
}
