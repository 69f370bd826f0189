/// Alphabet of flattened expressions. The discriminant is the digit used in
/// bijective base-32 packing (1..=32); digits 27..=32 are reserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Symbol {
    TagTerm = 1,
    TagFormula = 2,
    TagProof = 3,
    Zero = 4,
    Succ = 5,
    Plus = 6,
    Times = 7,
    Var = 8,
    Bit0 = 9,
    Bit1 = 10,
    Eq = 11,
    Le = 12,
    Not = 13,
    Or = 14,
    And = 15,
    Implies = 16,
    ForAll = 17,
    Exists = 18,
    Step = 19,
    AxiomLogical = 20,
    AxiomNonLogical = 21,
    ModusPonens = 22,
    Generalization = 23,
    Nat = 24,
    Cons = 25,
    Nil = 26,
}

/// Number of digits in the packing radix, reserved slots included.
pub const RADIX: u32 = 32;

/// Number of assigned symbols.
pub const SYMBOL_COUNT: u8 = 26;

pub const ALL_SYMBOLS: [Symbol; SYMBOL_COUNT as usize] = {
    use Symbol::*;
    [
        TagTerm, TagFormula, TagProof, Zero, Succ, Plus, Times, Var, Bit0, Bit1, Eq, Le, Not, Or, And, Implies,
        ForAll, Exists, Step, AxiomLogical, AxiomNonLogical, ModusPonens, Generalization, Nat, Cons, Nil,
    ]
};

impl Symbol {
    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn from_digit(d: u8) -> Option<Symbol> {
        (1..=SYMBOL_COUNT).contains(&d).then(|| ALL_SYMBOLS[d as usize - 1])
    }

    /// Number of argument expressions that follow the symbol.
    pub fn arity(self) -> u8 {
        use Symbol::*;
        match self {
            Zero | Var | AxiomNonLogical | Nat | Nil => 0,
            TagTerm | TagFormula | TagProof | Succ | Bit0 | Bit1 | Not => 1,
            Plus | Times | Eq | Le | Or | And | Implies | ForAll | Exists | Step | AxiomLogical | ModusPonens
            | Generalization | Cons => 2,
        }
    }
}
