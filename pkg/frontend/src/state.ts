/** Pure editing core: every user gesture becomes an edit object, every
 *  edit either produces a new state or is rejected with a message. No
 *  network and no DOM in this module, which is what keeps it testable. */

import type { CanvasDoc, Relation, SpeciesEntry } from './types.js';
import { RELATIONS } from './types.js';

export interface UiNode {
  id: string;
  species: string;
  attributes: string[];
}

export interface UiEdge {
  source: string;
  relation: Relation;
  target: string;
}

export interface UiBox {
  name: string;
  x: number;
  y: number;
  width: number;
  height: number;
  z: number;
}

export interface HistoryEntry {
  seq: number;
  note: string;
  edit: GraphEdit | LayoutEdit;
}

export interface UiState {
  canvas: CanvasDoc;
  nodes: UiNode[];
  edges: UiEdge[];
  boxes: UiBox[];
  history: HistoryEntry[];
}

export type GraphEdit =
  | {
      kind: 'add_node';
      id: string;
      species: string;
      attributes?: string[];
      box?: { width: number; height: number };
    }
  | { kind: 'remove_node'; id: string }
  | { kind: 'add_edge'; source: string; relation: string; target: string }
  | { kind: 'remove_edge'; source: string; target: string }
  | { kind: 'relabel_edge'; source: string; target: string; relation: string };

export type LayoutEdit =
  | { kind: 'move'; name: string; x: number; y: number }
  | { kind: 'resize'; name: string; width: number; height: number }
  | { kind: 'reorder'; name: string; rank: number };

export type EditResult =
  | { ok: true; state: UiState }
  | { ok: false; error: string };

const RELATION_ALIASES: Record<string, Relation> = {
  'left': 'left',
  'left of': 'left',
  'right': 'right',
  'right of': 'right',
  'top': 'top',
  'above': 'top',
  'on top of': 'top',
  'bottom': 'bottom',
  'below': 'bottom',
  'under': 'bottom',
  'behind': 'behind',
  'in back of': 'behind',
  'front': 'in front of',
  'in front': 'in front of',
  'in front of': 'in front of',
};

export function normalizeRelation(text: string): Relation | null {
  const token = text.trim().toLowerCase().replace(/\s+/g, ' ');
  return RELATION_ALIASES[token] ?? null;
}

export function emptyState(canvas: CanvasDoc = { width: 512, height: 512 }): UiState {
  return { canvas, nodes: [], edges: [], boxes: [], history: [] };
}

/** Starting box size for a palette species, scaled to fit the canvas. */
export function defaultBoxSize(
  entry: SpeciesEntry,
  canvas: CanvasDoc,
): { width: number; height: number } {
  let height = Math.max(1, Math.round(entry.canonical_height));
  let width = Math.max(1, Math.round(height * entry.aspect_ratio));
  if (height > canvas.height) {
    width = Math.max(1, Math.round((width * canvas.height) / height));
    height = canvas.height;
  }
  if (width > canvas.width) {
    height = Math.max(1, Math.round((height * canvas.width) / width));
    width = canvas.width;
  }
  return { width, height };
}

function reject(error: string): EditResult {
  return { ok: false, error };
}

function commit(state: UiState, edit: GraphEdit | LayoutEdit, note: string): EditResult {
  const entry: HistoryEntry = { seq: state.history.length, note, edit };
  return { ok: true, state: { ...state, history: [...state.history, entry] } };
}

function samePair(edge: UiEdge, source: string, target: string): boolean {
  return (
    (edge.source === source && edge.target === target) ||
    (edge.source === target && edge.target === source)
  );
}

function nextSpot(state: UiState, size: { width: number; height: number }): { x: number; y: number } {
  // stagger new boxes so palette clicks never stack exactly
  const step = state.boxes.length;
  const x = Math.min(24 + step * 40, Math.max(0, state.canvas.width - size.width));
  const y = Math.min(24 + step * 30, Math.max(0, state.canvas.height - size.height));
  return { x, y };
}

export function applyGraphEdit(state: UiState, edit: GraphEdit): EditResult {
  switch (edit.kind) {
    case 'add_node': {
      const id = edit.id.trim();
      if (!id) return reject('node id must not be empty');
      if (!edit.species.trim()) return reject('species must not be empty');
      if (state.nodes.some((n) => n.id === id)) {
        return reject(`node '${id}' already exists`);
      }
      const size = edit.box ?? { width: 64, height: 64 };
      if (size.width < 1 || size.height < 1) {
        return reject('box size must be at least 1x1');
      }
      const spot = nextSpot(state, size);
      const node: UiNode = {
        id,
        species: edit.species.trim(),
        attributes: [...(edit.attributes ?? [])],
      };
      // new boxes go to the back: z grows with depth
      const box: UiBox = { name: id, ...spot, ...size, z: state.boxes.length };
      const next = {
        ...state,
        nodes: [...state.nodes, node],
        boxes: [...state.boxes, box],
      };
      return commit(next, edit, `add ${edit.species} '${id}'`);
    }
    case 'remove_node': {
      if (!state.nodes.some((n) => n.id === edit.id)) {
        return reject(`no node '${edit.id}'`);
      }
      const survivors = state.boxes
        .filter((b) => b.name !== edit.id)
        .sort((a, b) => a.z - b.z)
        .map((b, rank) => ({ ...b, z: rank }));
      const next = {
        ...state,
        nodes: state.nodes.filter((n) => n.id !== edit.id),
        edges: state.edges.filter(
          (e) => e.source !== edit.id && e.target !== edit.id,
        ),
        boxes: survivors,
      };
      return commit(next, edit, `remove '${edit.id}'`);
    }
    case 'add_edge': {
      const relation = normalizeRelation(edit.relation);
      if (relation === null) {
        return reject(
          `unknown relation '${edit.relation}'; use one of: ${RELATIONS.join(', ')}`,
        );
      }
      if (edit.source === edit.target) {
        return reject('an edge needs two different nodes');
      }
      for (const id of [edit.source, edit.target]) {
        if (!state.nodes.some((n) => n.id === id)) return reject(`no node '${id}'`);
      }
      if (state.edges.some((e) => samePair(e, edit.source, edit.target))) {
        return reject(
          `'${edit.source}' and '${edit.target}' already have a relation; relabel or remove it`,
        );
      }
      const next = {
        ...state,
        edges: [...state.edges, { source: edit.source, relation, target: edit.target }],
      };
      return commit(next, edit, `${edit.source} ${relation} ${edit.target}`);
    }
    case 'remove_edge': {
      const keep = state.edges.filter((e) => !samePair(e, edit.source, edit.target));
      if (keep.length === state.edges.length) {
        return reject(`no edge between '${edit.source}' and '${edit.target}'`);
      }
      return commit({ ...state, edges: keep }, edit, `unlink ${edit.source}/${edit.target}`);
    }
    case 'relabel_edge': {
      const relation = normalizeRelation(edit.relation);
      if (relation === null) {
        return reject(
          `unknown relation '${edit.relation}'; use one of: ${RELATIONS.join(', ')}`,
        );
      }
      const index = state.edges.findIndex(
        (e) => e.source === edit.source && e.target === edit.target,
      );
      if (index < 0) {
        return reject(`no edge from '${edit.source}' to '${edit.target}'`);
      }
      const edges = state.edges.map((e, i) => (i === index ? { ...e, relation } : e));
      return commit(
        { ...state, edges },
        edit,
        `${edit.source} ${relation} ${edit.target}`,
      );
    }
  }
}

export function applyLayoutEdit(state: UiState, edit: LayoutEdit): EditResult {
  const box = state.boxes.find((b) => b.name === edit.name);
  if (!box) return reject(`no box '${edit.name}'`);

  switch (edit.kind) {
    case 'move': {
      // clamp so the whole box stays on the canvas
      const x = clamp(Math.round(edit.x), 0, state.canvas.width - box.width);
      const y = clamp(Math.round(edit.y), 0, state.canvas.height - box.height);
      const boxes = state.boxes.map((b) => (b === box ? { ...b, x, y } : b));
      return commit({ ...state, boxes }, edit, `move '${edit.name}' to ${x},${y}`);
    }
    case 'resize': {
      // floor at one pixel, then keep the box inside the canvas
      const width = clamp(Math.max(1, Math.round(edit.width)), 1, state.canvas.width - box.x);
      const height = clamp(Math.max(1, Math.round(edit.height)), 1, state.canvas.height - box.y);
      const boxes = state.boxes.map((b) => (b === box ? { ...b, width, height } : b));
      return commit(
        { ...state, boxes },
        edit,
        `resize '${edit.name}' to ${width}x${height}`,
      );
    }
    case 'reorder': {
      const ordered = [...state.boxes].sort((a, b) => a.z - b.z);
      const from = ordered.findIndex((b) => b.name === edit.name);
      const rank = clamp(Math.round(edit.rank), 0, ordered.length - 1);
      const [moving] = ordered.splice(from, 1);
      ordered.splice(rank, 0, moving as UiBox);
      const depth = new Map(ordered.map((b, i) => [b.name, i]));
      const boxes = state.boxes.map((b) => ({ ...b, z: depth.get(b.name) as number }));
      return commit({ ...state, boxes }, edit, `send '${edit.name}' to depth ${rank}`);
    }
  }
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(Math.max(value, low), Math.max(low, high));
}
