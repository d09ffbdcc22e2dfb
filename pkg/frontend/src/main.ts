import { ApiClient } from "./api.js";
import { App } from "./app.js";

// Served by the curation service itself, so the API lives at the same origin.
const app = new App(new ApiClient(""));

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => app.mount());
} else {
  app.mount();
}
