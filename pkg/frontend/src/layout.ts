/** Presentation-only force-directed layout (never persisted).
 *
 * Deterministic: node positions are seeded from a hash of the node id,
 * so the same graph always lays out the same way.
 */

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

export interface LayoutEdge {
  src: string;
  dst: string;
}

function hash(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return (h >>> 0) / 0xffffffff;
}

export function computeLayout(
  ids: string[],
  edges: LayoutEdge[],
  width: number,
  height: number,
  iterations = 200,
): Map<string, LayoutNode> {
  const nodes = new Map<string, LayoutNode>();
  for (const id of ids) {
    nodes.set(id, {
      id,
      x: width * (0.15 + 0.7 * hash(id)),
      y: height * (0.15 + 0.7 * hash(id + "#y")),
    });
  }
  const area = width * height;
  const k = Math.sqrt(area / Math.max(ids.length, 1));
  let temperature = width / 8;

  for (let it = 0; it < iterations; it++) {
    const disp = new Map<string, { dx: number; dy: number }>();
    for (const id of ids) disp.set(id, { dx: 0, dy: 0 });

    // pairwise repulsion
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = nodes.get(ids[i])!;
        const b = nodes.get(ids[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let dist = Math.hypot(dx, dy);
        if (dist < 1e-6) {
          dx = hash(ids[i] + ids[j]) - 0.5;
          dy = 0.5 - hash(ids[j] + ids[i]);
          dist = Math.hypot(dx, dy);
        }
        const force = (k * k) / dist;
        const da = disp.get(ids[i])!;
        const db = disp.get(ids[j])!;
        da.dx += (dx / dist) * force;
        da.dy += (dy / dist) * force;
        db.dx -= (dx / dist) * force;
        db.dy -= (dy / dist) * force;
      }
    }

    // spring attraction along edges
    for (const e of edges) {
      const a = nodes.get(e.src);
      const b = nodes.get(e.dst);
      if (!a || !b) continue;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const dist = Math.max(Math.hypot(dx, dy), 1e-6);
      const force = (dist * dist) / k;
      const da = disp.get(e.src)!;
      const db = disp.get(e.dst)!;
      da.dx -= (dx / dist) * force;
      da.dy -= (dy / dist) * force;
      db.dx += (dx / dist) * force;
      db.dy += (dy / dist) * force;
    }

    for (const id of ids) {
      const n = nodes.get(id)!;
      const d = disp.get(id)!;
      const len = Math.max(Math.hypot(d.dx, d.dy), 1e-6);
      const step = Math.min(len, temperature);
      n.x += (d.dx / len) * step;
      n.y += (d.dy / len) * step;
      n.x = Math.min(width - 20, Math.max(20, n.x));
      n.y = Math.min(height - 20, Math.max(20, n.y));
    }
    temperature *= 0.95;
  }
  return nodes;
}
