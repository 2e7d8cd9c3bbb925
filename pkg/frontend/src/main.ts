/** Bootstrap: load the project named in the URL hash and wire the
 * panes to one shared state cell. */
import { ApiClient } from "./api.js";
import { mountApp } from "./dom.js";
import { EditorActions } from "./editor.js";
import { initialState, type ViewState } from "./state.js";

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const projectId = window.location.hash.slice(1);
  if (!projectId) {
    root.textContent = "Open as index.html#<project-id> against a running adfit service.";
    return;
  }

  const api = new ApiClient("");
  let state: ViewState = initialState(await api.getProject(projectId));

  const ref = {
    get: () => state,
    set: (next: ViewState) => {
      state = next;
      mount.update(state);
    },
  };
  const actions = new EditorActions(api, ref);
  const mount = mountApp(root, ref.get, ref.set, actions);
  mount.update(state);
}

void start();
