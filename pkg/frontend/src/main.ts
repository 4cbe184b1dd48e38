import { ApiClient } from "./api.js";
import { Wizard } from "./wizard.js";

function serverBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("server") ?? "";
}

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("wizard");
  if (!root) {
    throw new Error("missing #wizard mount point");
  }
  const wizard = new Wizard(root, new ApiClient(serverBase()));
  void wizard.start();
});
