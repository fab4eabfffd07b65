/**
 * Pure view-model for the entity explorer.
 *
 * The tree is assembled from four catalogued queries — entity types plus the
 * three containment predicates — because the query language has no UNION.
 * All structure comes from the server's entailed graph; the client only
 * groups and sorts the rows it is given.
 */

import type { Client, QueryResult } from "./api.js";

export const BRICK = "https://brickschema.org/schema/Brick#";

const PREFIX = `PREFIX brick: <${BRICK}>\n`;

export const TREE_QUERIES = {
  types: `SELECT ?s ?t WHERE { ?s a ?t . }`,
  partOf: PREFIX + `SELECT ?child ?parent WHERE { ?child brick:isPartOf ?parent . }`,
  locationOf: PREFIX + `SELECT ?parent ?child WHERE { ?parent brick:isLocationOf ?child . }`,
  hasPoint: PREFIX + `SELECT ?parent ?child WHERE { ?parent brick:hasPoint ?child . }`,
} as const;

export interface TreeNode {
  iri: string;
  label: string;
  /** Local name of the entity's class, "" when untyped. */
  kind: string;
  /** True when the edge to the parent was hasPoint: clicking charts it. */
  isPoint: boolean;
  children: TreeNode[];
}

export function localName(iri: string): string {
  const hash = iri.lastIndexOf("#");
  if (hash >= 0) {
    return iri.slice(hash + 1);
  }
  const slash = iri.lastIndexOf("/");
  return slash >= 0 ? iri.slice(slash + 1) : iri;
}

type Edge = [parent: string, child: string];

function pairs(result: QueryResult, first: string, second: string): Edge[] {
  const out: Edge[] = [];
  for (const row of result.results.bindings) {
    const a = row[first];
    const b = row[second];
    if (a !== undefined && b !== undefined) {
      out.push([a.value, b.value]);
    }
  }
  return out;
}

export interface TreeInput {
  /** (entity, class) pairs. */
  types: Edge[];
  /** (parent, child) pairs from inverted isPartOf rows. */
  partOf: Edge[];
  /** (parent, child) pairs from isLocationOf rows. */
  locationOf: Edge[];
  /** (parent, child) pairs from hasPoint rows. */
  hasPoint: Edge[];
}

export function buildTree(input: TreeInput): TreeNode[] {
  // Entailment types every entity with its whole superclass chain, so the
  // displayed kind is the entity's type with the fewest members: a subclass
  // never has more members than its superclass. Ties break alphabetically.
  const extent = new Map<string, Set<string>>();
  const typesOf = new Map<string, string[]>();
  for (const [entity, klass] of input.types) {
    let members = extent.get(klass);
    if (members === undefined) {
      members = new Set();
      extent.set(klass, members);
    }
    members.add(entity);
    let list = typesOf.get(entity);
    if (list === undefined) {
      list = [];
      typesOf.set(entity, list);
    }
    list.push(klass);
  }
  const kinds = new Map<string, string>();
  for (const [entity, classes] of typesOf.entries()) {
    const best = classes.reduce((a, b) => {
      const sizeA = extent.get(a)?.size ?? 0;
      const sizeB = extent.get(b)?.size ?? 0;
      if (sizeA !== sizeB) {
        return sizeA < sizeB ? a : b;
      }
      return localName(a) <= localName(b) ? a : b;
    });
    kinds.set(entity, localName(best));
  }

  const children = new Map<string, Map<string, boolean>>();
  const hasParent = new Set<string>();
  const everyone = new Set<string>(kinds.keys());
  const addEdge = (parent: string, child: string, isPoint: boolean) => {
    everyone.add(parent);
    everyone.add(child);
    hasParent.add(child);
    let bucket = children.get(parent);
    if (bucket === undefined) {
      bucket = new Map();
      children.set(parent, bucket);
    }
    bucket.set(child, bucket.get(child) || isPoint);
  };
  for (const [parent, child] of input.partOf) {
    addEdge(parent, child, false);
  }
  for (const [parent, child] of input.locationOf) {
    addEdge(parent, child, false);
  }
  for (const [parent, child] of input.hasPoint) {
    addEdge(parent, child, true);
  }

  const grow = (iri: string, isPoint: boolean, path: Set<string>): TreeNode => {
    const node: TreeNode = {
      iri,
      label: localName(iri),
      kind: kinds.get(iri) ?? "",
      isPoint,
      children: [],
    };
    const bucket = children.get(iri);
    if (bucket !== undefined && !path.has(iri)) {
      path.add(iri);
      node.children = [...bucket.entries()]
        .map(([child, point]) => grow(child, point, path))
        .sort((a, b) => a.label.localeCompare(b.label));
      path.delete(iri);
    }
    return node;
  };

  return [...everyone]
    .filter((iri) => !hasParent.has(iri))
    .map((iri) => grow(iri, false, new Set()))
    .sort((a, b) => a.label.localeCompare(b.label));
}

export function countNodes(roots: TreeNode[]): number {
  let total = 0;
  const walk = (node: TreeNode) => {
    total += 1;
    node.children.forEach(walk);
  };
  roots.forEach(walk);
  return total;
}

export function findNode(roots: TreeNode[], iri: string): TreeNode | undefined {
  for (const root of roots) {
    if (root.iri === iri) {
      return root;
    }
    const below = findNode(root.children, iri);
    if (below !== undefined) {
      return below;
    }
  }
  return undefined;
}

/** Run the four catalogued queries and assemble the tree for one graph. */
export async function loadTree(client: Client, graph: string): Promise<TreeNode[]> {
  const [types, partOf, locationOf, hasPoint] = await Promise.all([
    client.query(TREE_QUERIES.types, graph),
    client.query(TREE_QUERIES.partOf, graph),
    client.query(TREE_QUERIES.locationOf, graph),
    client.query(TREE_QUERIES.hasPoint, graph),
  ]);
  return buildTree({
    types: pairs(types, "s", "t"),
    partOf: pairs(partOf, "parent", "child"),
    locationOf: pairs(locationOf, "parent", "child"),
    hasPoint: pairs(hasPoint, "parent", "child"),
  });
}
