//! Named moulds, the closed-form correction formulas and the synthesizer of
//! corrected model moulds.

mod builders;
mod corrections;
pub mod generators;
pub mod numbers;
mod synth;

pub use builders::{build_const_mould_c, build_that01, build_u, build_u1, that01_component, CorrectionSpec};
pub use corrections::{
    exp_fay_correction, grouplike_fay_propagate, thm32_correction, thm32_correction_checked, thm34_correction,
    Propagation,
};
pub use numbers::{bernoulli, bernoulli_table, binomial, factorial};
pub use synth::{synthesize_corrected_mould, SynthesisProfile};
