/**
 * Console session state: which graph is selected, the query editor text,
 * and the last analysis request. Pure data plus defaults; the DOM layer
 * reads and writes it through plain assignment.
 */

export interface AnalysisSettings {
  windowStart: number;
  windowEnd: number;
  interval: number;
  method: "linear" | "changepoint";
}

export interface ConsoleSession {
  graph: string;
  queryText: string;
  analysis: AnalysisSettings;
  /** When true the query panel shows the raw response JSON, not the table. */
  showRawJson: boolean;
}

export const DEFAULT_QUERY = `PREFIX brick: <https://brickschema.org/schema/Brick#>
SELECT ?zone ?unit WHERE {
  ?zone a brick:HVAC_Zone .
  ?unit brick:feeds ?zone .
}`;

export function defaultSession(graph = ""): ConsoleSession {
  return {
    graph,
    queryText: DEFAULT_QUERY,
    analysis: {
      windowStart: 0,
      windowEnd: 7 * 86400,
      interval: 3600,
      method: "changepoint",
    },
    showRawJson: false,
  };
}
