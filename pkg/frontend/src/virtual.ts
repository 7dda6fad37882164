/** Windowed rendering for large card grids.
 *
 * The overview can hold hundreds of pattern cards per layer; rendering them
 * all makes scrolling crawl. Cards are laid out in fixed-height rows, and
 * only the rows near the viewport exist in the DOM — spacer padding keeps
 * the scrollbar honest.
 */

export interface Window {
  /** First item index to render (inclusive). */
  start: number;
  /** One past the last item index to render. */
  end: number;
  /** Pixels of spacer above the rendered rows. */
  padTop: number;
  /** Pixels of spacer below the rendered rows. */
  padBottom: number;
}

export function computeWindow(
  scrollTop: number,
  viewportHeight: number,
  rowHeight: number,
  total: number,
  columns: number,
  overscanRows: number = 2,
): Window {
  if (total <= 0 || rowHeight <= 0 || columns <= 0) {
    return { start: 0, end: 0, padTop: 0, padBottom: 0 };
  }
  const totalRows = Math.ceil(total / columns);
  // clamp so a stale scroll offset past the content still yields a window
  const firstVisibleRow = Math.min(
    totalRows - 1,
    Math.floor(Math.max(0, scrollTop) / rowHeight),
  );
  const visibleRows = Math.ceil(Math.max(0, viewportHeight) / rowHeight) + 1;

  const startRow = Math.max(0, firstVisibleRow - overscanRows);
  const endRow = Math.min(totalRows, firstVisibleRow + visibleRows + overscanRows);

  return {
    start: startRow * columns,
    end: Math.min(total, endRow * columns),
    padTop: startRow * rowHeight,
    padBottom: (totalRows - endRow) * rowHeight,
  };
}

export interface VirtualGridOptions {
  rowHeight: number;
  /** Minimum card width used to derive the column count from the container. */
  minColumnWidth: number;
  overscanRows?: number;
  renderItem: (index: number) => HTMLElement;
}

/**
 * Binds a scroll container to a windowed grid. Returns a handle whose
 * `setTotal` re-renders for a new item count and whose `refresh` re-renders
 * in place (e.g. after the data behind the indices changed).
 */
export function mountVirtualGrid(
  container: HTMLElement,
  opts: VirtualGridOptions,
): { setTotal(total: number): void; refresh(): void; dispose(): void } {
  const { rowHeight, minColumnWidth, renderItem } = opts;
  const overscan = opts.overscanRows ?? 2;

  const topPad = document.createElement("div");
  const grid = document.createElement("div");
  grid.className = "virtual-grid";
  const bottomPad = document.createElement("div");
  container.replaceChildren(topPad, grid, bottomPad);

  let total = 0;
  let lastWindow: Window = { start: 0, end: 0, padTop: 0, padBottom: 0 };

  function columns(): number {
    const width = container.clientWidth || minColumnWidth;
    return Math.max(1, Math.floor(width / minColumnWidth));
  }

  function render(force: boolean): void {
    const cols = columns();
    const win = computeWindow(
      container.scrollTop,
      container.clientHeight || rowHeight,
      rowHeight,
      total,
      cols,
      overscan,
    );
    if (!force && win.start === lastWindow.start && win.end === lastWindow.end) {
      return;
    }
    lastWindow = win;
    topPad.style.height = `${win.padTop}px`;
    bottomPad.style.height = `${win.padBottom}px`;
    grid.style.gridTemplateColumns = `repeat(${cols}, minmax(0, 1fr))`;
    const items: HTMLElement[] = [];
    for (let i = win.start; i < win.end; i++) {
      items.push(renderItem(i));
    }
    grid.replaceChildren(...items);
  }

  const onScroll = (): void => render(false);
  container.addEventListener("scroll", onScroll);

  return {
    setTotal(next: number): void {
      total = next;
      container.scrollTop = 0;
      render(true);
    },
    refresh(): void {
      render(true);
    },
    dispose(): void {
      container.removeEventListener("scroll", onScroll);
      container.replaceChildren();
    },
  };
}
