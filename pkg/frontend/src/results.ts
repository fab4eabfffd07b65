/** Pure view-model for the query panel: result table and count line. */

import type { Binding, QueryResult } from "./api.js";

export interface ResultTable {
  columns: string[];
  rows: string[][];
  countLine: string;
}

/** "Showing 1 to N of N entries", the classic data-table footer. */
export function countLine(total: number): string {
  if (total <= 0) {
    return "Showing 0 to 0 of 0 entries";
  }
  return `Showing 1 to ${total} of ${total} entries`;
}

/** Render a term the way the query editor accepts it back. */
export function formatTerm(binding: Binding | undefined): string {
  if (binding === undefined) {
    return "";
  }
  if (binding.type === "uri") {
    return `<${binding.value}>`;
  }
  if (binding.type === "bnode") {
    return `_:${binding.value}`;
  }
  if (binding["xml:lang"]) {
    return `"${binding.value}"@${binding["xml:lang"]}`;
  }
  if (binding.datatype) {
    return `"${binding.value}"^^<${binding.datatype}>`;
  }
  return `"${binding.value}"`;
}

export function tableModel(result: QueryResult): ResultTable {
  const columns = result.head.vars;
  const rows = result.results.bindings.map((row) =>
    columns.map((name) => formatTerm(row[name])),
  );
  return { columns, rows, countLine: countLine(rows.length) };
}
