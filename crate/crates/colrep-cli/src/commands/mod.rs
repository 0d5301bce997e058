pub mod compare;
pub mod eval;
pub mod fit_dict;
pub mod select;
pub mod synth;
