/**
 * Hover tooltips for citation markers. In the intent condition the
 * citation intent renders ahead of the snippet inside the tooltip.
 */

let activeTooltip: HTMLElement | null = null;

export function hideTooltip(): void {
  activeTooltip?.remove();
  activeTooltip = null;
}

export function attachTooltip(
  target: HTMLElement,
  buildContent: () => HTMLElement
): void {
  target.addEventListener("mouseenter", () => {
    hideTooltip();
    const tooltip = document.createElement("div");
    tooltip.className = "tooltip";
    tooltip.appendChild(buildContent());
    const rect = target.getBoundingClientRect();
    tooltip.style.position = "fixed";
    tooltip.style.left = `${rect.left}px`;
    tooltip.style.top = `${rect.bottom + 6}px`;
    document.body.appendChild(tooltip);
    activeTooltip = tooltip;
  });
  target.addEventListener("mouseleave", hideTooltip);
}
