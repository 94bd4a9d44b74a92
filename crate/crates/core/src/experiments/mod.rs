//! Declarative parameter sweeps reproducing the figure set, with CSV and SVG output.

mod plot;
mod run;
mod spec;
mod table;

pub use plot::{emit_plot, emit_plot_with_layout, render_svg, PlotLayout, PlotPanel, Series};
pub use run::{run_sweep, run_sweep_with_progress, Metadata, SweepRecord, POINTER_CONVENTION};
pub use spec::{builtin_figure, builtin_figures, Panel, Quantity, SweepSpec, TimeSelection, FIGURE_TAGS};
pub use table::{emit_table, parse_table, read_table, write_table, COLUMNS};
