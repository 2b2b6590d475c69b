//! Dg algebras, dg modules, relative tensor products and mapping modules.

mod algebra;
mod filtration;
mod maps;
mod module;
mod tensor;

pub use algebra::{same_algebra, AlgebraMorphism, DgAlgebra};
pub use filtration::{cycle_filtration, find_left_retract, verify_cellular_filtration, FiltrationCertificate, FiltrationReport, Retract};
pub use maps::{
    find_invertible, find_module_isomorphism, flatten, is_pure_weak_equivalence, linear_solutions, map_module, module_maps,
    kernel_submodule, module_map_failure, submodule, tensor_left_map, MapModule, PurityVerdict, Submodule,
};
pub use module::{Action, DgModule, ModuleMap, Side, Sidedness};
pub use tensor::{tensor_over, Block, Degrees, TensorNode, TensorProduct, TensorTree, Terms, Word};

use std::sync::Arc;

use crate::complexes::ComplexError;
use crate::linalg::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DgError {
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("missing {0:?} action")]
    MissingAction(Side),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("structure does not descend to the tensor product: {0}")]
    NonDescending(String),
}

/// Direction of a change of scalars along `φ: A → B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarChange {
    /// A `B`-module viewed as an `A`-module.
    Restrict,
    /// `M ↦ M ⊗_A B` for a right `A`-module `M`.
    Extend,
}

/// Restriction or extension of scalars on the right along `φ`.
pub fn scalars_along<S: Scalar>(phi: &AlgebraMorphism<S>, m: &Arc<DgModule<S>>, change: ScalarChange) -> Result<Arc<DgModule<S>>, DgError> {
    match change {
        ScalarChange::Restrict => Ok(Arc::new(m.restrict(Side::Right, phi)?)),
        ScalarChange::Extend => {
            let b = DgModule::regular(phi.target()).restrict(Side::Left, phi)?;
            Ok(Arc::new(tensor_over(m, &b)?.module))
        }
    }
}
