//! Black-box falsification of signal temporal logic requirements with online
//! generative-adversarial surrogates.
//!
//! * [`stl`]: formulas, parser, robustness semantics.
//! * [`nets`]: dense networks, backpropagation, Adam.
//! * [`ogan`]: the generator/discriminator surrogate for one requirement.
//! * [`search`]: Latin hypercube initialization and the three search loops.
//! * [`suts`]: the system-under-test interface and built-in systems.
//! * [`bench`]: replicated experiments, summary statistics and result files.

pub mod bench;
pub mod nets;
pub mod ogan;
pub mod search;
pub mod stl;
pub mod suts;
