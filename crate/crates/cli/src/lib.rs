//! Library half of the `certeig` command: matrix input, the certification
//! report and its SVG picture.

pub mod input;
pub mod report;
pub mod svg;

pub use input::{parse_matrix, parse_matrix_text, InputFormat, Mode};
pub use report::{render_text, run, Report, RunConfig};
pub use svg::{render_svg, write_svg};
