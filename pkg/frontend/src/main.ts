/** Page wiring: tabs for graph / queue / changelog, detect trigger,
 * connection banner. The server is the sole source of truth; views
 * refetch after every mutation.
 */

import { ApiClient } from "./api.js";
import { renderCommunityView } from "./graphview.js";
import { ReviewQueue } from "./queue.js";

export function startApp(root: HTMLElement, api: ApiClient): {
  refreshAll: () => Promise<void>;
  queue: ReviewQueue;
} {
  root.innerHTML = `
    <header>
      <h1>Pattern curation</h1>
      <button id="detect-btn">Detect communities</button>
      <div id="banner" class="banner" hidden></div>
    </header>
    <main>
      <section id="graph-panel"><div id="graph-view"></div></section>
      <section id="queue-panel"><div id="queue-view"></div></section>
      <section id="changelog-panel"><pre id="changelog-view"></pre></section>
    </main>
  `;

  const banner = root.querySelector<HTMLElement>("#banner")!;
  const showBanner = (message: string) => {
    banner.textContent = message;
    banner.hidden = false;
  };
  const clearBanner = () => {
    banner.hidden = true;
  };

  const queue = new ReviewQueue(
    api,
    root.querySelector<HTMLElement>("#queue-view")!,
    showBanner,
  );

  const refreshAll = async () => {
    try {
      const [graph, communities, changelog] = await Promise.all([
        api.graph(),
        api.communities(),
        api.changelog(),
      ]);
      renderCommunityView(
        root.querySelector<HTMLElement>("#graph-view")!,
        graph,
        communities,
      );
      root.querySelector<HTMLElement>("#changelog-view")!.textContent =
        changelog;
      await queue.refresh();
      clearBanner();
    } catch (err) {
      showBanner(`Server unreachable: ${String(err)}`);
    }
  };

  root
    .querySelector<HTMLButtonElement>("#detect-btn")!
    .addEventListener("click", async () => {
      try {
        await api.detect();
        await refreshAll();
      } catch (err) {
        showBanner(`Detection failed: ${String(err)}`);
      }
    });

  void refreshAll();
  return { refreshAll, queue };
}

declare global {
  interface Window {
    __CURATOR_API_BASE__?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(
    document.getElementById("app")!,
    new ApiClient(window.__CURATOR_API_BASE__ ?? ""),
  );
}
