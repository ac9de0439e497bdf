/** Wire types shared with the pipeline service. Field names and shapes
 *  mirror the JSON the service emits and accepts; change nothing here
 *  without a matching change on the Python side. */

export const RELATIONS = [
  'left',
  'right',
  'top',
  'bottom',
  'behind',
  'in front of',
] as const;

export type Relation = (typeof RELATIONS)[number];

export interface GraphNodeDoc {
  id: string;
  species: string;
  attributes: string[];
}

export interface GraphEdgeDoc {
  source: string;
  relation: Relation;
  target: string;
}

export interface GraphDoc {
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
}

export interface CanvasDoc {
  width: number;
  height: number;
}

export interface ElementDoc {
  name: string;
  x: number;
  y: number;
  width: number;
  height: number;
  z: number;
}

export interface LayoutDoc {
  canvas: CanvasDoc;
  elements: ElementDoc[];
}

export interface SpeciesEntry {
  species: string;
  category: string;
  aspect_ratio: number;
  canonical_height: number;
}

export interface KbDoc {
  depth_scale: number;
  species: SpeciesEntry[];
}

export interface StyleDoc {
  season?: string;
  time_of_day?: string;
  style?: string;
}

/** One session step as the service records it. */
export interface RecordDoc {
  index: number;
  kind: string;
  timestamp: string;
  seed: number | null;
  text: string | null;
  graph: GraphDoc | null;
  layout: LayoutDoc | null;
  style: StyleDoc | null;
  layout_source: string | null;
  image_ref: string | null;
  transcripts: Record<string, unknown> | null;
  error: string | null;
}

export interface ReplayEntryDoc {
  index: number;
  kind: string;
  status: string;
}

export interface ReplayDoc {
  session_id: string;
  ok: boolean;
  entries: ReplayEntryDoc[];
}
