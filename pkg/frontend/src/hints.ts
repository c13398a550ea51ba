// Mouseover-activated demonstration animations for icon buttons.
// Hovering HOVER_DELAY_MS starts the animation, leaving stops it, and an
// active drag suppresses hints entirely. Animations never auto-play.

export const HOVER_DELAY_MS = 400;

export class HintController {
  private dragActive = false;
  private timers = new Map<HTMLElement, ReturnType<typeof setTimeout>>();

  setDragActive(active: boolean): void {
    this.dragActive = active;
    if (active) {
      for (const [el, timer] of this.timers) {
        clearTimeout(timer);
        el.classList.remove("hint-playing");
      }
      this.timers.clear();
    }
  }

  attach(el: HTMLElement): void {
    el.addEventListener("mouseenter", () => {
      if (this.dragActive) return;
      const timer = setTimeout(() => {
        if (!this.dragActive) el.classList.add("hint-playing");
        this.timers.delete(el);
      }, HOVER_DELAY_MS);
      this.timers.set(el, timer);
    });
    el.addEventListener("mouseleave", () => {
      const timer = this.timers.get(el);
      if (timer !== undefined) {
        clearTimeout(timer);
        this.timers.delete(el);
      }
      el.classList.remove("hint-playing");
    });
  }
}
