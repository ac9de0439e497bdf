/** Four-panel editor: describe, graph, layout, result. Everything the
 *  panels do goes through the reducers in state.ts; the service is only
 *  contacted on the explicit Concretize / Render buttons. */

import { ServiceClient, ServiceError } from './api.js';
import type { GraphEdit, LayoutEdit, UiState } from './state.js';
import {
  applyGraphEdit,
  applyLayoutEdit,
  defaultBoxSize,
  emptyState,
} from './state.js';
import { fromDocs, toGraphDoc, toLayoutDoc } from './serialize.js';
import type { RecordDoc, SpeciesEntry } from './types.js';
import { RELATIONS } from './types.js';

const MOVE_STEP = 10;
const RESIZE_STEP = 10;

class App {
  state: UiState = emptyState();
  client = new ServiceClient(window.location.origin);
  sessionId: string | null = null;
  palette: SpeciesEntry[] = [];
  selected: string | null = null;

  private status!: HTMLElement;
  private stage!: HTMLElement;
  private nodeList!: HTMLElement;
  private edgeList!: HTMLElement;
  private historyList!: HTMLElement;
  private image!: HTMLImageElement;
  private description!: HTMLTextAreaElement;
  private paletteSelect!: HTMLSelectElement;
  private edgeSource!: HTMLSelectElement;
  private edgeTarget!: HTMLSelectElement;
  private edgeRelation!: HTMLSelectElement;

  async start(root: HTMLElement): Promise<void> {
    this.buildPanels(root);
    try {
      this.palette = await this.client.palette();
      this.fillPalette();
      this.say(`ready; ${this.palette.length} species in the palette`);
    } catch (error) {
      this.say(`cannot load palette: ${describe(error)}`);
    }
  }

  private graphEdit(edit: GraphEdit): void {
    const result = applyGraphEdit(this.state, edit);
    if (!result.ok) {
      this.say(result.error);
      return;
    }
    this.state = result.state;
    this.redraw();
  }

  private layoutEdit(edit: LayoutEdit): void {
    const result = applyLayoutEdit(this.state, edit);
    if (!result.ok) {
      this.say(result.error);
      return;
    }
    this.state = result.state;
    this.redraw();
  }

  private addFromPalette(): void {
    const species = this.paletteSelect.value;
    const entry = this.palette.find((e) => e.species === species);
    if (!entry) return;
    let id = species;
    for (let n = 2; this.state.nodes.some((node) => node.id === id); n += 1) {
      id = `${species}-${n}`;
    }
    this.graphEdit({
      kind: 'add_node',
      id,
      species,
      box: defaultBoxSize(entry, this.state.canvas),
    });
  }

  private async withSession(): Promise<string> {
    if (this.sessionId) return this.sessionId;
    const description = this.description.value.trim() || 'untitled design';
    this.sessionId = await this.client.createSession(description);
    return this.sessionId;
  }

  private async concretizeText(): Promise<void> {
    await this.callService(async () => {
      const id = await this.withSession();
      const text = this.description.value.trim();
      if (!text) throw new ServiceError(0, 'describe the scene first');
      const record = await this.client.concretize(id, { text });
      this.adopt(record);
      this.say(`concretized from text (layout: ${record.layout_source})`);
    });
  }

  private async concretizeGraph(): Promise<void> {
    await this.callService(async () => {
      const id = await this.withSession();
      const record = await this.client.concretize(id, {
        graph: toGraphDoc(this.state),
      });
      this.adopt(record);
      this.say(`concretized from graph (layout: ${record.layout_source})`);
    });
  }

  private async render(): Promise<void> {
    await this.callService(async () => {
      const id = await this.withSession();
      const record = await this.client.render(id, {
        layout: toLayoutDoc(this.state),
        seed: Math.floor(Math.random() * 1000),
      });
      if (record.image_ref) {
        this.image.src = this.client.imageUrl(record.image_ref);
      }
      this.say(`rendered iteration ${record.index}`);
      await this.refreshHistory(id);
    });
  }

  private async refreshHistory(id: string): Promise<void> {
    const records = await this.client.history(id);
    this.historyList.replaceChildren(
      ...records.map((r: RecordDoc) => {
        const item = document.createElement('li');
        item.textContent = `${r.index}: ${r.kind}${r.error ? ` (${r.error})` : ''}`;
        return item;
      }),
    );
  }

  private adopt(record: RecordDoc): void {
    if (record.graph && record.layout) {
      const edited = fromDocs(record.graph, record.layout);
      this.state = { ...edited, history: this.state.history };
      this.redraw();
    }
  }

  private async callService(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (error) {
      this.say(describe(error));
    }
  }

  private say(message: string): void {
    this.status.textContent = message;
  }

  private redraw(): void {
    this.drawStage();
    this.drawNodeList();
    this.drawEdgeControls();
  }

  private drawStage(): void {
    const scale = this.stage.clientWidth
      ? this.stage.clientWidth / this.state.canvas.width
      : 1;
    this.stage.replaceChildren(
      ...[...this.state.boxes]
        .sort((a, b) => b.z - a.z)
        .map((box) => {
          const el = document.createElement('div');
          el.className = 'box' + (box.name === this.selected ? ' selected' : '');
          el.style.left = `${box.x * scale}px`;
          el.style.top = `${box.y * scale}px`;
          el.style.width = `${box.width * scale}px`;
          el.style.height = `${box.height * scale}px`;
          el.textContent = `${box.name} (z${box.z})`;
          el.addEventListener('click', () => {
            this.selected = box.name;
            this.redraw();
          });
          return el;
        }),
    );
  }

  private drawNodeList(): void {
    this.nodeList.replaceChildren(
      ...this.state.nodes.map((node) => {
        const item = document.createElement('li');
        item.textContent = `${node.id} [${node.species}] `;
        const remove = document.createElement('button');
        remove.textContent = 'remove';
        remove.addEventListener('click', () =>
          this.graphEdit({ kind: 'remove_node', id: node.id }),
        );
        item.append(remove);
        return item;
      }),
    );
    const ids = this.state.nodes.map((n) => n.id);
    for (const select of [this.edgeSource, this.edgeTarget]) {
      const current = select.value;
      select.replaceChildren(
        ...ids.map((id) => new Option(id, id, false, id === current)),
      );
    }
  }

  private drawEdgeControls(): void {
    this.edgeList.replaceChildren(
      ...this.state.edges.map((edge) => {
        const item = document.createElement('li');
        item.textContent = `${edge.source} ${edge.relation} ${edge.target} `;
        const remove = document.createElement('button');
        remove.textContent = 'remove';
        remove.addEventListener('click', () =>
          this.graphEdit({
            kind: 'remove_edge',
            source: edge.source,
            target: edge.target,
          }),
        );
        item.append(remove);
        return item;
      }),
    );
  }

  private fillPalette(): void {
    this.paletteSelect.replaceChildren(
      ...this.palette.map((entry) => new Option(entry.species, entry.species)),
    );
  }

  private buildPanels(root: HTMLElement): void {
    root.innerHTML = `
      <div class="panel" id="describe-panel">
        <h2>Describe</h2>
        <textarea id="description" rows="5"
          placeholder="A pine behind a bed of roses..."></textarea>
        <button id="concretize-text">Concretize description</button>
        <button id="concretize-graph">Concretize graph</button>
      </div>
      <div class="panel" id="graph-panel">
        <h2>Graph</h2>
        <div>
          <select id="palette"></select>
          <button id="add-node">Add plant</button>
        </div>
        <ul id="nodes"></ul>
        <div>
          <select id="edge-source"></select>
          <select id="edge-relation"></select>
          <select id="edge-target"></select>
          <button id="add-edge">Add relation</button>
        </div>
        <ul id="edges"></ul>
      </div>
      <div class="panel" id="layout-panel">
        <h2>Layout</h2>
        <div id="stage"></div>
        <div class="controls">
          <button data-move="-1,0">left</button>
          <button data-move="1,0">right</button>
          <button data-move="0,-1">up</button>
          <button data-move="0,1">down</button>
          <button data-resize="1">grow</button>
          <button data-resize="-1">shrink</button>
          <button id="to-front">bring forward</button>
          <button id="to-back">push back</button>
        </div>
        <button id="render">Render</button>
      </div>
      <div class="panel" id="result-panel">
        <h2>Result</h2>
        <img id="result" alt="rendered scene" />
        <ol id="history"></ol>
      </div>
      <p id="status"></p>
    `;
    this.status = root.querySelector('#status') as HTMLElement;
    this.stage = root.querySelector('#stage') as HTMLElement;
    this.nodeList = root.querySelector('#nodes') as HTMLElement;
    this.edgeList = root.querySelector('#edges') as HTMLElement;
    this.historyList = root.querySelector('#history') as HTMLElement;
    this.image = root.querySelector('#result') as HTMLImageElement;
    this.description = root.querySelector('#description') as HTMLTextAreaElement;
    this.paletteSelect = root.querySelector('#palette') as HTMLSelectElement;
    this.edgeSource = root.querySelector('#edge-source') as HTMLSelectElement;
    this.edgeTarget = root.querySelector('#edge-target') as HTMLSelectElement;
    this.edgeRelation = root.querySelector('#edge-relation') as HTMLSelectElement;
    this.edgeRelation.replaceChildren(
      ...RELATIONS.map((r) => new Option(r, r)),
    );

    root.querySelector('#add-node')?.addEventListener('click', () => this.addFromPalette());
    root.querySelector('#add-edge')?.addEventListener('click', () =>
      this.graphEdit({
        kind: 'add_edge',
        source: this.edgeSource.value,
        relation: this.edgeRelation.value,
        target: this.edgeTarget.value,
      }),
    );
    root.querySelector('#concretize-text')?.addEventListener('click', () => this.concretizeText());
    root.querySelector('#concretize-graph')?.addEventListener('click', () => this.concretizeGraph());
    root.querySelector('#render')?.addEventListener('click', () => this.render());

    for (const button of root.querySelectorAll<HTMLButtonElement>('[data-move]')) {
      button.addEventListener('click', () => {
        const box = this.state.boxes.find((b) => b.name === this.selected);
        if (!box) return this.say('select a box first');
        const [dx, dy] = (button.dataset.move as string).split(',').map(Number);
        this.layoutEdit({
          kind: 'move',
          name: box.name,
          x: box.x + (dx as number) * MOVE_STEP,
          y: box.y + (dy as number) * MOVE_STEP,
        });
      });
    }
    for (const button of root.querySelectorAll<HTMLButtonElement>('[data-resize]')) {
      button.addEventListener('click', () => {
        const box = this.state.boxes.find((b) => b.name === this.selected);
        if (!box) return this.say('select a box first');
        const sign = Number(button.dataset.resize);
        this.layoutEdit({
          kind: 'resize',
          name: box.name,
          width: box.width + sign * RESIZE_STEP,
          height: box.height + sign * RESIZE_STEP,
        });
      });
    }
    root.querySelector('#to-front')?.addEventListener('click', () => {
      const box = this.state.boxes.find((b) => b.name === this.selected);
      if (!box) return this.say('select a box first');
      this.layoutEdit({ kind: 'reorder', name: box.name, rank: Math.max(0, box.z - 1) });
    });
    root.querySelector('#to-back')?.addEventListener('click', () => {
      const box = this.state.boxes.find((b) => b.name === this.selected);
      if (!box) return this.say('select a box first');
      this.layoutEdit({
        kind: 'reorder',
        name: box.name,
        rank: Math.min(this.state.boxes.length - 1, box.z + 1),
      });
    });
  }
}

function describe(error: unknown): string {
  if (error instanceof ServiceError) {
    return error.status ? `service said ${error.status}: ${error.message}` : error.message;
  }
  return error instanceof Error ? error.message : String(error);
}

const root = document.getElementById('app');
if (root) {
  void new App().start(root);
}
