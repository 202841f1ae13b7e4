//! Algorithms on Gallai colorings: edge colorings of complete graphs with no
//! rainbow triangle.
//!
//! The library provides, as executable algorithms with exact arithmetic:
//!
//! * [`coloring`] — the core [`coloring::EdgeColoring`] type, rainbow-triangle
//!   detection, witness checking, and the `.gal` text/JSON formats;
//! * [`oracle`] — exact maximum subchromatic sets by branch and bound, and
//!   exhaustive small-instance enumeration used as ground truth everywhere;
//! * [`products`] — lexicographic products, substitution blow-ups, the exact
//!   product law for subchromatic numbers, and a seeded random generator;
//! * [`decomposition`] — Gallai partitions and the three-cograph edge
//!   partition with cotree clique/independent-set recursions;
//! * [`ramsey`] — a constructive two-coloring clique-pair extractor with a
//!   binomial certificate, a weighted Ramsey engine over exact rationals, and
//!   randomized search for colorings with small monochromatic cliques;
//! * [`extraction`] — lower-bound extractors: the cograph cascade, the
//!   three-pair product recursion, the general weak bound, the tight
//!   three-color recursion, and the certificate-producing general recursion;
//! * [`constructions`] — upper-bound colorings built from weight graphs on
//!   the palette, plus the optimal weight-graph regimes;
//! * [`discrepancy`] — heavy color-set searches and the second-moment
//!   variance audit for edge-weighted palettes;
//! * [`asymptotics`] — exact evaluation of the recursion-driving functions
//!   and machine verification of their growth facts.
//!
//! All randomized operations are deterministic given a 64-bit seed, which
//! feeds a ChaCha8 stream cipher RNG. All asserted inequalities are exact:
//! integer, rational, or outward-rounded interval comparisons against
//! logarithms; no floating point is used in any verdict.

pub mod asymptotics;
pub mod bits;
pub mod coloring;
pub mod constructions;
pub mod decomposition;
pub mod discrepancy;
pub mod error;
pub mod exact;
pub mod extraction;
pub mod oracle;
pub mod products;
pub mod ramsey;

pub use coloring::{ColorSet, EdgeColoring, Witness};
pub use error::{Error, Result};
