//! Renderings of analysis results and per-requirement explanations.

mod explain;
mod render;

pub use explain::{explain_requirement, ExplainError, Explanation};
pub use render::{render_report, render_whatif, RenderFormat, UnknownFormat};
