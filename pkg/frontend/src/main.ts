/** Browser bootstrap: wire the controller to the DOM and start polling. */

import { ApiClient } from './api.js';
import { AppController, type AppState } from './controller.js';
import { layoutTree } from './layout.js';
import { renderFlow } from './render/flow.js';
import { renderKnowledge, renderRecommendations } from './render/recommend.js';
import { renderReview } from './render/review.js';
import { renderTooltip, renderTree } from './render/tree.js';

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
};

function render(state: AppState): void {
  const banner = $('banner');
  banner.hidden = state.banner === null;
  if (state.banner !== null) {
    banner.querySelector('.banner-text')!.textContent = state.banner;
  }

  if (state.tree) {
    $('tree-pane').innerHTML = renderTree(layoutTree(state.tree), {
      selectedId: state.selectedId,
      hoverId: state.hoverId,
    });
  }
  const tooltip = $('tooltip');
  if (state.tooltip) {
    tooltip.hidden = false;
    tooltip.innerHTML = renderTooltip(state.tooltip);
  } else {
    tooltip.hidden = true;
  }
  if (state.flow) {
    $('flow-pane').innerHTML = renderFlow(state.flow);
  }
  if (state.review) {
    $('review-pane').innerHTML = renderReview(state.review);
  }
  if (state.recommendations) {
    $('recommend-pane').innerHTML =
      renderRecommendations(state.recommendations, state.recommendedCell) +
      (state.knowledge ? renderKnowledge(state.knowledge) : '');
  }
}

function nodeIdFrom(event: Event): string | null {
  const target = event.target as Element | null;
  return target?.closest<SVGGElement>('[data-node-id]')?.dataset.nodeId ?? null;
}

function main(): void {
  const controller = new AppController(new ApiClient(''), render);

  const treePane = $('tree-pane');
  treePane.addEventListener('click', (event) => {
    const nodeId = nodeIdFrom(event);
    if (nodeId) void controller.handleNodeClick(nodeId);
  });
  treePane.addEventListener('mouseover', (event) => {
    const nodeId = nodeIdFrom(event);
    if (nodeId) {
      const tooltip = $('tooltip');
      const mouse = event as MouseEvent;
      tooltip.style.left = `${mouse.pageX + 14}px`;
      tooltip.style.top = `${mouse.pageY + 14}px`;
      void controller.handleNodeHover(nodeId);
    }
  });
  treePane.addEventListener('mouseout', (event) => {
    if (nodeIdFrom(event)) void controller.handleNodeHover(null);
  });

  $('flow-pane').addEventListener('click', (event) => {
    const cell = (event.target as Element | null)?.closest<SVGGElement>('[data-cell-id]');
    if (cell?.dataset.cellId) void controller.selectCell(cell.dataset.cellId);
  });

  $('retry').addEventListener('click', () => void controller.retry());

  void controller.refreshTree();
  controller.startPolling(2000);
}

main();
