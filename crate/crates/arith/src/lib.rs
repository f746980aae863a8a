//! Arithmetic circuits over discrete variables and the probabilistic
//! pipelines built on them: maximizer circuits, PSDDs and compiled Bayesian
//! networks.

pub mod ac;
pub mod bn;
pub mod dataset;
pub mod derivatives;
pub mod factor;
pub mod maximizer;
pub mod psdd;
pub mod scalar;

pub use ac::{parse_ac, AcBuilder, AcNode, AcProperties, ArithmeticCircuit, IndicatorSetting};
pub use bn::{parse_bn, BayesNet, WmcEncoding};
pub use dataset::{parse_dataset, Dataset};
pub use derivatives::{backprop, soft_evidence, Gradient};
pub use factor::{parse_instantiation, DiscreteVar, Factor, Inst, DEFAULT_ROW_CAP};
pub use maximizer::{enumerate_complete_subcircuits, maximizer_of, mpe, CompleteSubcircuit, MaximizerCircuit};
pub use psdd::{learn_ml_complete, parse_psdd, Psdd};
pub use scalar::Scalar;
