//! Gauging tensor network states with belief propagation.
//!
//! This crate transforms tensor network states (TNS) on arbitrary graphs —
//! paths, trees, lattices, random regular graphs, periodic unit cells — into
//! the Vidal gauge: vertex tensors `Γ_v` plus nonnegative diagonal bond
//! tensors `Λ_e` such that absorbing all but one bond tensor into a `Γ_v`
//! yields an isometry toward the remaining edge. Three routines are
//! provided and compared:
//!
//! * **belief-propagation gauging** — iterate the message self-consistency
//!   equations on the norm network, then perform one gauge transformation at
//!   the end;
//! * **eager gauging** — pay for a full gauge transformation every sweep;
//! * **simple-update gauging** — sweep identity-gate simple updates over the
//!   edges of a state already in (possibly poor) Vidal form.
//!
//! On top of the gauging core sit simple-update gate evolution with optional
//! re-gauging, Trotterized transverse-field-Ising imaginary time evolution,
//! random-unitary circuits with fidelity tracking, and rank-one (message /
//! `Λ²` environment) observables, including on periodic unit cells standing
//! in for infinite lattices.
//!
//! # Layout
//!
//! | module | contents |
//! |---|---|
//! | [`tensor`], [`index`], [`linalg`] | labeled dense tensors, contraction, SVD/QR/Hermitian roots |
//! | [`graph`], [`network`] | multigraphs, TNS / Vidal states, exact-contraction oracles |
//! | [`bp`] | message tensors, schedules, square-root updates, convergence estimation |
//! | [`gauge`] | the three gauging routines and the distance-to-Vidal-gauge diagnostic |
//! | [`evolve`] | two-site gate application, Trotter layers, fidelity tracking |
//! | [`models`] | lattices, random regular graphs, random TNS, Neel and Ising states |
//! | [`observables`] | rank-one and exact expectation values |
//! | [`runner`] | config files, CSV output, and the CLI commands |
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example gauge_square        # BP-gauge a random 6x6 TNS
//! cargo run --release --example compare_routines    # three routines, one fixed point
//! cargo run --release --example mps_schmidt         # path graph: Λ = Schmidt spectrum
//! cargo run --release --example ising_critical_scan # iterations vs beta peak
//! cargo run --release --example imaginary_time      # TFI evolution with re-gauging
//! cargo run --release --example random_circuit      # fidelity with re-gauging
//! cargo run --release --example infinite_lattice    # periodic cell vs open lattices
//! cargo run --release --example save_load_network   # text + base64 serialization
//! ```
//!
//! The same functionality is reachable through the thin `tngauge` binary
//! (`gauge`, `bench`, `ising-scan`, `evolve`, `infinite` subcommands).

pub mod bp;
pub mod error;
pub mod evolve;
pub mod gauge;
pub mod graph;
pub mod index;
pub mod linalg;
pub mod models;
pub mod network;
pub mod observables;
pub mod runner;
pub mod serialize;
pub mod tensor;

pub use error::{Error, Result};
pub use graph::{DirectedEdge, EdgeId, Graph, VertexId};
pub use index::{Index, IndexKind};
pub use network::{TensorNetworkState, VidalState};
pub use tensor::{contract, LabeledTensor};
