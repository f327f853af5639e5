import { ApiClient } from "./api.js";
import { ExplorerStore } from "./state.js";
import { ExplorerView } from "./dom.js";

async function boot() {
  const base = new URLSearchParams(location.search).get("server") ?? "http://127.0.0.1:8765";
  const api = new ApiClient(base);
  const store = new ExplorerStore(api);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const view = new ExplorerView(store, api, root);
  await store.createSession("cp2", { lam: "3" });
  await store.prepare();
  await view.refresh();
}

boot().catch((err) => {
  const el = document.getElementById("app");
  if (el) el.textContent = `failed to start: ${err}`;
});
