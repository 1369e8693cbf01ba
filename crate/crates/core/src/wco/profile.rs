use serde::Serialize;

use crate::error::{pair, Error, Result};
use crate::funcexpr::{default_radii, radial_limit, vanishing_order, Expr, LimitStatus, Vanishing};
use crate::hardy::MembershipVerdict;
use crate::hb::{hb_membership, HbSpace};
use crate::scalar::{cis, cst, dyadic_radius, from_usize, to_f64, two_pi, Real, C};

const SELF_MAP_TOL: f64 = 1e-10;
const INTERIOR_MARGIN: f64 = 1e-8;
const ZERO_MATCH: f64 = 1e-6;

/// Behaviour of `u` at a boundary zero `ζᵢ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UOrder<T> {
    /// `u^{(ℓ)}(ζᵢ) ≠ 0` for the smallest such `ℓ < mᵢ`.
    Order { l: usize, value: C<T> },
    /// `u` vanishes to order `mᵢ` or more.
    Flat,
    /// Some derivative of `u` below order `mᵢ` has no radial limit.
    NoLimit { order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZetaClass {
    Flat,
    /// `φ(ζᵢ) ∈ D`.
    Interior,
    /// `φ(ζᵢ) = ζ_j`, a zero of `a`.
    ZeroOfA { target: usize },
    UnimodularOther,
    NoLimit,
}

/// Profile of `(u, φ)` at one boundary zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaRecord<T> {
    pub zeta: C<T>,
    pub mult: usize,
    pub u_order: UOrder<T>,
    pub phi_status: Option<LimitStatus>,
    pub phi_limit: Option<C<T>>,
    pub class: ZetaClass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolProfile<T> {
    pub records: Vec<ZetaRecord<T>>,
    /// Indices with class `Interior`.
    pub d_set: Vec<usize>,
    /// `λⱼ = φ(ζⱼ)` for `j` in `d_set`.
    pub lambdas: Vec<C<T>>,
    /// `u ∈ H(b)`.
    pub h1: MembershipVerdict<T>,
    /// `u·φ ∈ H(b)`.
    pub h2: MembershipVerdict<T>,
    pub u_is_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NcVerdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Check `|φ| < 1` on radii `1 - 2^{-k}`, `k = 1..=20`, and the origin,
/// times 256 angles.
pub fn check_self_map<T: Real>(phi: &Expr<T>) -> Result<()> {
    let limit = T::one() + cst(SELF_MAP_TOL);
    let step = two_pi::<T>() / cst(256.0);
    let radii = std::iter::once(T::zero()).chain((1..=20).map(dyadic_radius::<T>));
    for r in radii {
        for j in 0..256 {
            let z = cis(step * (from_usize::<T>(j) + cst(0.5))) * r;
            let v = phi.eval(z)?;
            if !(v.norm() < limit) {
                return Err(Error::NotSelfMap { z: pair(z), modulus: to_f64(v.norm()) });
            }
        }
    }
    Ok(())
}

/// Classify `(u, φ)` at every boundary zero of `a`.
pub fn symbol_profile<T: Real>(space: &HbSpace<T>, u: &Expr<T>, phi: &Expr<T>) -> Result<SymbolProfile<T>> {
    check_self_map(phi)?;
    let u_is_zero = HbSpace::vanishes(u);
    let h1 = hb_membership(space, u);
    let h2 = hb_membership(space, &Expr::mul(u.clone(), phi.clone()));
    let radii = default_radii::<T>();
    let mut records = Vec::with_capacity(space.zeros.len());
    for z in &space.zeros {
        let u_order = if u_is_zero {
            UOrder::Flat
        } else {
            match vanishing_order(u, z.zeta, z.mult) {
                Ok(Vanishing::Order(l, value)) => UOrder::Order { l, value },
                Ok(Vanishing::Flat) => UOrder::Flat,
                Ok(Vanishing::NoLimit { order, .. }) => UOrder::NoLimit { order },
                Err(_) => UOrder::NoLimit { order: 0 },
            }
        };
        let mut rec = ZetaRecord {
            zeta: z.zeta,
            mult: z.mult,
            u_order,
            phi_status: None,
            phi_limit: None,
            class: ZetaClass::Flat,
        };
        if u_order != UOrder::Flat {
            match radial_limit(phi, z.zeta, &radii) {
                Ok(lim) => {
                    rec.phi_status = Some(lim.status);
                    rec.phi_limit = lim.value;
                    rec.class = match lim.value {
                        Some(v) if lim.is_converged() => classify_limit(space, v),
                        _ => ZetaClass::NoLimit,
                    };
                }
                Err(_) => rec.class = ZetaClass::NoLimit,
            }
        }
        records.push(rec);
    }
    let d_set: Vec<usize> = (0..records.len()).filter(|&i| records[i].class == ZetaClass::Interior).collect();
    let lambdas = d_set.iter().map(|&i| records[i].phi_limit.expect("interior has a limit")).collect();
    Ok(SymbolProfile { records, d_set, lambdas, h1, h2, u_is_zero })
}

fn classify_limit<T: Real>(space: &HbSpace<T>, v: C<T>) -> ZetaClass {
    if v.norm() < T::one() - cst(INTERIOR_MARGIN) {
        return ZetaClass::Interior;
    }
    match space.zeros.iter().position(|z| (z.zeta - v).norm() < cst(ZERO_MATCH)) {
        Some(target) => ZetaClass::ZeroOfA { target },
        None => ZetaClass::UnimodularOther,
    }
}

/// Condition (NC): at every non-flat `ζᵢ`, `φ(ζᵢ) ∈ D ∪ Z(a)`.
pub fn check_nc<T: Real>(profile: &SymbolProfile<T>) -> NcVerdict {
    let mut verdict = NcVerdict::Pass;
    for r in &profile.records {
        match r.class {
            ZetaClass::Flat | ZetaClass::Interior | ZetaClass::ZeroOfA { .. } => {}
            ZetaClass::UnimodularOther => return NcVerdict::Fail,
            ZetaClass::NoLimit => {
                if r.phi_status == Some(LimitStatus::Oscillating) {
                    verdict = NcVerdict::Inconclusive;
                } else {
                    return NcVerdict::Fail;
                }
            }
        }
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn f1() -> HbSpace<f64> {
        HbSpace::from_expr(&parse_expr("(1+z)/2").unwrap()).unwrap()
    }

    fn profile(u: &str, phi: &str) -> SymbolProfile<f64> {
        symbol_profile(&f1(), &parse_expr(u).unwrap(), &parse_expr(phi).unwrap()).unwrap()
    }

    #[test]
    fn profile_examples() {
        let p = profile("1", "0.1*(z-1)");
        assert!(matches!(p.records[0].u_order, UOrder::Order { l: 0, .. }));
        assert_eq!(p.records[0].class, ZetaClass::Interior);
        assert_eq!(p.d_set, vec![0]);
        assert!(p.lambdas[0].norm() < 1e-12);

        let p = profile("1", "1-(1-z)^(1/2)");
        assert_eq!(p.records[0].class, ZetaClass::ZeroOfA { target: 0 });
        assert!(p.d_set.is_empty());

        let p = profile("z-1", "-z");
        assert_eq!(p.records[0].class, ZetaClass::Flat);
    }

    #[test]
    fn nc_examples() {
        assert_eq!(check_nc(&profile("1", "-z")), NcVerdict::Fail);
        assert_eq!(check_nc(&profile("1", "z")), NcVerdict::Pass);
        assert_eq!(check_nc(&profile("z-1", "-z")), NcVerdict::Pass);
    }

    #[test]
    fn rejects_non_self_map() {
        let e = symbol_profile(&f1(), &parse_expr("1").unwrap(), &parse_expr("2*z").unwrap());
        assert!(matches!(e, Err(Error::NotSelfMap { .. })));
    }
}
