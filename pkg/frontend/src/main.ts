import { bootstrap } from "./app.js";

const root = document.getElementById("app");
if (root) {
  void bootstrap(root).catch((error) => {
    root.textContent = `Failed to load: ${error instanceof Error ? error.message : String(error)}`;
  });
}
