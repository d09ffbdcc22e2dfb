/**
 * Card selection model: a plain set of series uids plus a range anchor.
 *
 * Selection deliberately survives re-queries and pagination; uids that
 * fall out of the visible page stay selected until explicitly cleared.
 */

export interface Selection {
  readonly selected: ReadonlySet<string>;
  readonly anchor: string | null;
}

export const EMPTY_SELECTION: Selection = { selected: new Set(), anchor: null };

export function toggleOne(sel: Selection, uid: string): Selection {
  const next = new Set(sel.selected);
  if (next.has(uid)) {
    next.delete(uid);
    return { selected: next, anchor: uid };
  }
  next.add(uid);
  return { selected: next, anchor: uid };
}

/**
 * Shift-click: select every uid between the anchor and the clicked card,
 * inclusive, as a set union. Without a usable anchor it degrades to a
 * single toggle.
 */
export function selectRange(sel: Selection, order: readonly string[], uid: string): Selection {
  const to = order.indexOf(uid);
  const from = sel.anchor === null ? -1 : order.indexOf(sel.anchor);
  if (to < 0 || from < 0) {
    return toggleOne(sel, uid);
  }
  const [lo, hi] = from <= to ? [from, to] : [to, from];
  const next = new Set(sel.selected);
  for (let i = lo; i <= hi; i++) {
    next.add(order[i]);
  }
  return { selected: next, anchor: sel.anchor };
}

export function clearSelection(): Selection {
  return EMPTY_SELECTION;
}
