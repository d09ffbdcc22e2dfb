/** Transient notifications and the inline API-failure banner. */

export function toast(message: string, kind: "info" | "error" = "info"): void {
  const host = document.getElementById("toasts");
  if (!host) {
    return;
  }
  const node = document.createElement("div");
  node.className = `toast toast-${kind}`;
  node.textContent = message;
  host.appendChild(node);
  setTimeout(() => node.remove(), 4000);
}

/**
 * Replace a container's content with an error banner and a retry button.
 * Used wherever an API call backs a whole region, so failures never leave
 * a blank page.
 */
export function showRetryBanner(host: HTMLElement, message: string, retry: () => void): void {
  host.replaceChildren();
  const banner = document.createElement("div");
  banner.className = "retry-banner";
  const text = document.createElement("span");
  text.textContent = message;
  const button = document.createElement("button");
  button.type = "button";
  button.textContent = "Retry";
  button.addEventListener("click", retry);
  banner.append(text, button);
  host.appendChild(banner);
}
