/** Conversions between editor state and the service's JSON documents.
 *  The wire documents carry no history; full-state JSON carries
 *  everything so a session can be stashed and reopened. */

import type { UiState } from './state.js';
import type { GraphDoc, LayoutDoc } from './types.js';

export function toGraphDoc(state: UiState): GraphDoc {
  return {
    nodes: state.nodes.map((n) => ({
      id: n.id,
      species: n.species,
      attributes: [...n.attributes],
    })),
    edges: state.edges.map((e) => ({
      source: e.source,
      relation: e.relation,
      target: e.target,
    })),
  };
}

export function toLayoutDoc(state: UiState): LayoutDoc {
  return {
    canvas: { ...state.canvas },
    elements: state.boxes.map((b) => ({
      name: b.name,
      x: b.x,
      y: b.y,
      width: b.width,
      height: b.height,
      z: b.z,
    })),
  };
}

/** Rebuild editor state from wire documents, e.g. a concretize record. */
export function fromDocs(graph: GraphDoc, layout: LayoutDoc): UiState {
  return {
    canvas: { ...layout.canvas },
    nodes: graph.nodes.map((n) => ({
      id: n.id,
      species: n.species,
      attributes: [...(n.attributes ?? [])],
    })),
    edges: graph.edges.map((e) => ({ ...e })),
    boxes: layout.elements.map((el) => ({
      name: el.name,
      x: el.x,
      y: el.y,
      width: el.width,
      height: el.height,
      z: el.z,
    })),
    history: [],
  };
}

export function stateToJson(state: UiState): string {
  return JSON.stringify(state, null, 2);
}

export function stateFromJson(text: string): UiState {
  const raw = JSON.parse(text);
  for (const key of ['canvas', 'nodes', 'edges', 'boxes', 'history']) {
    if (!(key in raw)) throw new Error(`state JSON is missing '${key}'`);
  }
  return raw as UiState;
}
