//! Exact enumerative tools around Gopakumar–Vafa invariants.
//!
//! - [`series`]: truncated multivariate Laurent series over ℚ
//! - [`sl2rep`]: `sl₂ × sl₂` characters and Clebsch–Gordan decomposition
//! - [`k3hilb`]: the Hilbert-scheme generating series of K3 and its GV table
//! - [`gvgw`]: GV ↔ GW conversion by multiple-cover formula
//! - [`grr`]: symbolic Grothendieck–Riemann–Roch and the parity check
//! - [`cech`]: `F₂` Čech cohomology of finite nerves
//! - [`schema`], [`cli`]: JSON artifacts and the `gvkit` command

pub mod cech;
pub mod cli;
pub mod grr;
pub mod gvgw;
pub mod k3hilb;
pub mod schema;
pub mod series;
pub mod sl2rep;
