//! Class membership, formation residuals and related operators.
//!
//! Every class here is a formation, so the residual `G^f` (the least normal
//! subgroup with quotient in `f`) is the intersection of all normal `N` with
//! `G/N ∈ f`. That is how it is computed, for every class alike, and the
//! result is re-checked against `f`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::context::GroupContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormationError {
    #[error("quotient by the computed {0} residual is not in the class")]
    ResidualClosureFailure(Formation),
    #[error("unknown formation `{0}`")]
    Unknown(String),
}

/// The classes of groups the library can decide.
///
/// `Ab1`, `U1` and `A1` are the members of `Ab`, `U` and `A` with square-free
/// exponent. `NA`, `NA1` and `N2` are nilpotent-by-`A`, nilpotent-by-`A1`
/// and nilpotent-by-nilpotent: `G` belongs when its `A`, `A1` or `N`
/// residual is nilpotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formation {
    /// abelian
    Ab,
    /// nilpotent
    N,
    /// supersolvable
    U,
    /// all Sylow subgroups abelian
    A,
    /// Sylow tower of supersolvable type
    D,
    /// solvable
    S,
    /// all Sylow subgroups submodular
    Z,
    /// all cyclic primary subgroups submodular
    C,
    Ab1,
    U1,
    A1,
    NA,
    NA1,
    N2,
}

impl Formation {
    pub const ALL: [Formation; 14] = [
        Formation::Ab,
        Formation::N,
        Formation::U,
        Formation::A,
        Formation::D,
        Formation::S,
        Formation::Z,
        Formation::C,
        Formation::Ab1,
        Formation::U1,
        Formation::A1,
        Formation::NA,
        Formation::NA1,
        Formation::N2,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Formation::Ab => "Ab",
            Formation::N => "N",
            Formation::U => "U",
            Formation::A => "A",
            Formation::D => "D",
            Formation::S => "S",
            Formation::Z => "Z",
            Formation::C => "C",
            Formation::Ab1 => "Ab1",
            Formation::U1 => "U1",
            Formation::A1 => "A1",
            Formation::NA => "NA",
            Formation::NA1 => "NA1",
            Formation::N2 => "N2",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Formation::Ab => "𝔄",
            Formation::N => "𝔑",
            Formation::U => "𝔘",
            Formation::A => "𝒜",
            Formation::D => "𝔇",
            Formation::S => "𝔖",
            Formation::Z => "ℨ",
            Formation::C => "ℭ",
            Formation::Ab1 => "𝔄₁",
            Formation::U1 => "𝔘₁",
            Formation::A1 => "𝒜₁",
            Formation::NA => "𝔑𝒜",
            Formation::NA1 => "𝔑𝒜₁",
            Formation::N2 => "𝔑²",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    /// The class whose square-free-exponent members form `self`.
    pub fn square_free_base(self) -> Option<Formation> {
        match self {
            Formation::Ab1 => Some(Formation::Ab),
            Formation::U1 => Some(Formation::U),
            Formation::A1 => Some(Formation::A),
            _ => None,
        }
    }

    /// For nilpotent-by-`X` classes, the class `X`.
    pub fn nilpotent_by(self) -> Option<Formation> {
        match self {
            Formation::NA => Some(Formation::A),
            Formation::NA1 => Some(Formation::A1),
            Formation::N2 => Some(Formation::N),
            _ => None,
        }
    }

    /// Whether deciding membership needs submodularity.
    pub fn needs_modularity(self) -> bool {
        matches!(self, Formation::Z | Formation::C)
    }
}

impl fmt::Display for Formation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Formation {
    type Err = FormationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formation::ALL
            .iter()
            .copied()
            .find(|f| f.code().eq_ignore_ascii_case(s) || f.symbol() == s)
            .ok_or_else(|| FormationError::Unknown(s.to_string()))
    }
}

/// The residual `G^f` with the normal subgroups that certified it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualResult {
    pub formation: Formation,
    /// lattice index of the residual
    pub residual: usize,
    /// every normal subgroup whose quotient lies in the class
    pub witnesses: Vec<usize>,
}

/// Whether the group of `ctx` lies in `f`. Memoized per context.
pub fn in_class(ctx: &GroupContext, f: Formation) -> bool {
    *ctx.classes[f.index()].get_or_init(|| decide(ctx, f))
}

fn decide(ctx: &GroupContext, f: Formation) -> bool {
    let g = ctx.group();
    let l = ctx.lattice();
    let top = l.top();
    match f {
        Formation::Ab => g.is_abelian(),
        Formation::N => l.is_nilpotent_subgroup(top),
        Formation::U => l
            .chief_series_orders()
            .iter()
            .all(|&o| arith::is_prime(o)),
        Formation::A => g.prime_divisors().into_iter().all(|p| {
            let s = l.subgroup(l.sylow_subgroup(p));
            s.iter().all(|x| s.iter().all(|y| g.mul(x, y) == g.mul(y, x)))
        }),
        Formation::D => has_sylow_tower(ctx),
        Formation::S => g.is_solvable(),
        Formation::Z => g
            .prime_divisors()
            .into_iter()
            .all(|p| l.sylow_subgroups_all(p).into_iter().all(|s| ctx.submodular(s, top))),
        Formation::C => (0..g.order()).all(|x| {
            let o = g.element_order(x);
            o == 1 || arith::prime_power_base(o).is_none() || ctx.submodular(l.generated(&[x]), top)
        }),
        Formation::Ab1 | Formation::U1 | Formation::A1 => {
            g.is_square_free_exponent() && in_class(ctx, f.square_free_base().unwrap())
        }
        Formation::NA | Formation::NA1 | Formation::N2 => {
            match residual(ctx, f.nilpotent_by().unwrap()) {
                Ok(r) => l.is_nilpotent_subgroup(r.residual),
                // unreachable for a correct residual; membership stays total
                Err(_) => false,
            }
        }
    }
}

/// Sylow tower of supersolvable type: for primes `p_1 > p_2 > …` there are
/// normal subgroups `1 = G_0 ≤ G_1 ≤ …` with `|G_i/G_{i-1}| = |G|_{p_i}`.
/// Equivalently the Sylow subgroup for the largest prime is normal and the
/// quotient by it has such a tower.
fn has_sylow_tower(ctx: &GroupContext) -> bool {
    let l = ctx.lattice();
    let n = ctx.order();
    let mut primes = arith::prime_divisors(n);
    primes.reverse();
    let normals = l.normal_subgroups();
    let mut cur = l.bottom();
    for p in primes {
        let target = l.order_of(cur) * arith::p_part(n, p);
        match normals
            .iter()
            .copied()
            .find(|&y| l.order_of(y) == target && l.leq(cur, y))
        {
            Some(y) => cur = y,
            None => return false,
        }
    }
    true
}

/// The residual `G^f`: intersection of all normal `N` with `G/N ∈ f`.
pub fn residual(ctx: &GroupContext, f: Formation) -> Result<ResidualResult, FormationError> {
    ctx.residuals[f.index()]
        .get_or_init(|| {
            let l = ctx.lattice();
            let witnesses: Vec<usize> = l
                .normal_subgroups()
                .into_iter()
                .filter(|&n| ctx.quotient_in(n, f))
                .collect();
            let r = witnesses.iter().fold(l.top(), |acc, &n| l.meet(acc, n));
            if !ctx.quotient_in(r, f) {
                return Err(FormationError::ResidualClosureFailure(f));
            }
            Ok(ResidualResult {
                formation: f,
                residual: r,
                witnesses,
            })
        })
        .clone()
}

/// `𝔅(G)`: intersection of the normal `N` with `|π(G/N)| ≤ 2`.
pub fn b_operator(ctx: &GroupContext) -> usize {
    let l = ctx.lattice();
    let n = ctx.order();
    l.normal_subgroups()
        .into_iter()
        .filter(|&k| arith::prime_divisors(n / l.order_of(k)).len() <= 2)
        .fold(l.top(), |acc, k| l.meet(acc, k))
}

/// Every subgroup of `G'` is normal in `G`.
pub fn is_siding(ctx: &GroupContext) -> bool {
    let l = ctx.lattice();
    l.below(l.derived()).iter().all(|x| l.is_normal(x))
}

/// Whether `G/Φ(G)` lies in `f`.
pub fn frattini_quotient_in(ctx: &GroupContext, f: Formation) -> bool {
    ctx.quotient_in(ctx.lattice().frattini(), f)
}
