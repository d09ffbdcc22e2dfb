/**
 * Facet-filter surgery on raw query strings.
 *
 * The round-trip invariant is load-bearing: for any query q,
 * removeFilter(addFilter(q, f, v), f, v) === q, so clicking a chart
 * bucket twice always lands the user exactly where they started.
 */

export function facetClause(field: string, value: string): string {
  return `${field}:"${value}"`;
}

/** Bucket labels that are not literal field values cannot become filters. */
export function canFilter(value: string): boolean {
  if (value === "__missing__" || value.includes('"')) {
    return false;
  }
  // range-bin labels like [0.5..2) describe an interval, not a value
  return !(value.startsWith("[") && value.endsWith(")") && value.includes(".."));
}

export function hasFilter(query: string, field: string, value: string): boolean {
  return query.includes(facetClause(field, value));
}

export function addFilter(query: string, field: string, value: string): string {
  const clause = facetClause(field, value);
  return query ? `${query} AND ${clause}` : clause;
}

export function removeFilter(query: string, field: string, value: string): string {
  const clause = facetClause(field, value);
  if (query === clause) {
    return "";
  }
  const tail = ` AND ${clause}`;
  if (query.endsWith(tail)) {
    return query.slice(0, -tail.length);
  }
  const head = `${clause} AND `;
  if (query.startsWith(head)) {
    return query.slice(head.length);
  }
  const mid = ` AND ${clause} AND `;
  const at = query.indexOf(mid);
  if (at >= 0) {
    return query.slice(0, at) + " AND " + query.slice(at + mid.length);
  }
  return query;
}

export function toggleFilter(query: string, field: string, value: string): string {
  return hasFilter(query, field, value)
    ? removeFilter(query, field, value)
    : addFilter(query, field, value);
}

/**
 * The trailing `field:prefix` token of a partially typed query, if the
 * caret sits in one, so the search box can offer value completions.
 */
export function completableTail(query: string): { field: string; prefix: string } | null {
  const match = /(?:^|[\s(])([A-Za-z_][A-Za-z0-9_]*):([^\s":\][{}()]*)$/.exec(query);
  if (!match) {
    return null;
  }
  return { field: match[1], prefix: match[2] };
}

/** Replace the trailing field:prefix token with a completed value. */
export function applyCompletion(query: string, field: string, value: string): string {
  const tailStart = query.lastIndexOf(`${field}:`);
  if (tailStart < 0) {
    return query;
  }
  const completed = /[\s:]/.test(value) ? `"${value}"` : value;
  return query.slice(0, tailStart) + `${field}:${completed}`;
}
