import { ApiClient } from "./api.js";
import { buildApp } from "./view.js";

declare global {
  interface Window {
    PLAINLANG_API_BASE?: string;
  }
}

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const api = new ApiClient(window.PLAINLANG_API_BASE ?? "");
buildApp(root, api);
