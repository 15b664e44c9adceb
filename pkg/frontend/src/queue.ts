/** Review queue: one card per pending candidate.
 *
 * Verdicts always round-trip through the API — no local state
 * transitions. A 409 means the card went stale (e.g. enacted
 * concurrently), so the whole queue is refetched.
 */

import { ApiClient, ApiError, type Candidate } from "./api.js";

export class ReviewQueue {
  constructor(
    private readonly api: ApiClient,
    private readonly container: HTMLElement,
    private readonly onConflict: (message: string) => void = () => {},
  ) {}

  async refresh(): Promise<void> {
    const all = await this.api.candidates();
    const pending = all.filter((c) => c.status === "proposed");
    this.render(pending);
  }

  private render(pending: Candidate[]): void {
    this.container.innerHTML = "";
    if (pending.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "Review queue is empty.";
      this.container.appendChild(empty);
      return;
    }
    for (const cand of pending) this.container.appendChild(this.card(cand));
  }

  private card(cand: Candidate): HTMLElement {
    const card = document.createElement("article");
    card.className = "candidate-card";
    card.dataset.candidateId = cand.id;

    const title = document.createElement("h3");
    title.textContent =
      cand.kind === "merge"
        ? `Merge? ${cand.a.name} + ${cand.b.name}`
        : `New edge? ${cand.a.name} → ${cand.b.name}`;

    const scores = document.createElement("p");
    scores.className = "scores";
    scores.textContent =
      `total ${cand.scores.total.toFixed(3)} ` +
      `(name ${cand.scores.name_sim.toFixed(2)}, ` +
      `definition ${cand.scores.def_sim.toFixed(2)}, ` +
      `neighbors ${cand.scores.neighbor_sim.toFixed(2)})`;

    const sides = document.createElement("div");
    sides.className = "sides";
    for (const side of [cand.a, cand.b]) {
      const box = document.createElement("div");
      const name = document.createElement("strong");
      name.textContent = side.name;
      const def = document.createElement("p");
      def.textContent = side.definition || "(no definition)";
      const aliases = document.createElement("small");
      aliases.textContent = side.aliases.join("; ");
      box.append(name, def, aliases);
      sides.appendChild(box);
    }

    const rationale = document.createElement("textarea");
    rationale.placeholder = "Rationale (required)";
    rationale.className = "rationale";

    const approve = document.createElement("button");
    approve.textContent = "Approve";
    approve.className = "approve";
    const reject = document.createElement("button");
    reject.textContent = "Reject";
    reject.className = "reject";

    // empty rationale blocks submission client-side
    const sync = () => {
      const ok = rationale.value.trim().length > 0;
      approve.disabled = !ok;
      reject.disabled = !ok;
    };
    sync();
    rationale.addEventListener("input", sync);

    const submit = async (verdict: "approve" | "reject") => {
      try {
        await this.api.verdict(cand.id, verdict, rationale.value.trim());
        card.remove();
        if (this.container.children.length === 0) this.render([]);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.onConflict(
            `Candidate changed on the server (${err.detail}); refreshing queue.`,
          );
          await this.refresh();
          return;
        }
        throw err;
      }
    };
    approve.addEventListener("click", () => void submit("approve"));
    reject.addEventListener("click", () => void submit("reject"));

    const actions = document.createElement("div");
    actions.className = "actions";
    actions.append(approve, reject);
    card.append(title, scores, sides, rationale, actions);
    return card;
  }
}
