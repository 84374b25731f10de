//! Criterion benchmarks for the quadrature oracle and the case evaluator.
//! See `benches/`.
