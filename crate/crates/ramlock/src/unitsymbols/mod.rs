//! The F_p-space k^x/p, its unit filtration, and the mod-p Hilbert symbol.

mod hilbert;
mod space;

pub use hilbert::{
    algebra_norm, filtration_pairing_order, hilbert_symbol, kummer_root_level, norm_functional,
    pairing_order_formula, symbol_generators_mod_p, HilbertPairing, KummerRootLevel, PairingTable,
    SymbolGenerators, SymbolWitness,
};
pub use space::{BasisKind, FiltrationLevel, KummerForm, MulModPSpace};
