use std::fmt;

use serde::{Deserialize, Serialize};

/// Derivative descriptor attached to a jet variable.
///
/// `Second(k, a)` always has a spatial first slot (`k` in 1..=3). When both
/// slots are spatial the pair is stored sorted, so `∂_2∂_1` and `∂_1∂_2` are
/// the same variable. `∂_0∂_0` is not a jet variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Deriv {
    None,
    First(u8),
    Second(u8, u8),
}

impl Deriv {
    /// Canonical second derivative `∂_a∂_b` for arbitrary `a, b` in 0..=3.
    /// Returns `None` for the time-time derivative, which has no slot.
    pub fn from_pair(a: u8, b: u8) -> Option<Deriv> {
        debug_assert!(a <= 3 && b <= 3);
        match (a, b) {
            (0, 0) => None,
            (k, 0) | (0, k) => Some(Deriv::Second(k, 0)),
            (k, l) => Some(Deriv::Second(k.min(l), k.max(l))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            Deriv::None => 0,
            Deriv::First(_) => 1,
            Deriv::Second(..) => 2,
        }
    }

    /// Apply one more `∂_a`.
    pub fn differentiate(self, a: u8) -> Result<Deriv, DerivOverflow> {
        match self {
            Deriv::None => Ok(Deriv::First(a)),
            Deriv::First(b) => Deriv::from_pair(a, b).ok_or(DerivOverflow::TimeTime),
            Deriv::Second(..) => Err(DerivOverflow::ThirdOrder),
        }
    }

    /// The two derivative indices as an (unordered) pair, if second order.
    pub fn indices(self) -> Vec<u8> {
        match self {
            Deriv::None => vec![],
            Deriv::First(a) => vec![a],
            Deriv::Second(k, a) => vec![k, a],
        }
    }

    fn is_valid(self) -> bool {
        match self {
            Deriv::None => true,
            Deriv::First(a) => a <= 3,
            Deriv::Second(k, a) => (1..=3).contains(&k) && a <= 3 && (a == 0 || k <= a),
        }
    }
}

/// Why a derivative could not be taken inside the jet space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivOverflow {
    TimeTime,
    ThirdOrder,
}

impl fmt::Display for DerivOverflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivOverflow::TimeTime => write!(f, "time-time second derivative has no jet slot"),
            DerivOverflow::ThirdOrder => write!(f, "third derivatives are outside the jet space"),
        }
    }
}

/// One independent variable: `u_j`, `∂_a u_j` or `∂_k∂_a u_j`.
///
/// Components are 1-based, matching the JSON schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef {
    pub component: usize,
    pub deriv: Deriv,
}

impl VarRef {
    pub fn value(component: usize) -> Self {
        VarRef { component, deriv: Deriv::None }
    }

    pub fn first(component: usize, a: u8) -> Self {
        assert!(a <= 3, "derivative index {a} out of range");
        VarRef { component, deriv: Deriv::First(a) }
    }

    /// `∂_k∂_a u_j`, canonicalised. Panics on `∂_0∂_0`.
    pub fn second(component: usize, k: u8, a: u8) -> Self {
        let deriv = Deriv::from_pair(k, a).expect("∂_0∂_0 is not a jet variable");
        VarRef { component, deriv }
    }

    /// Build from raw parts, rejecting out-of-range indices. Second
    /// derivatives are canonicalised.
    pub fn try_new(component: usize, deriv: &[u8]) -> Result<Self, String> {
        if component == 0 {
            return Err("component indices are 1-based".into());
        }
        let deriv = match *deriv {
            [] => Deriv::None,
            [a] if a <= 3 => Deriv::First(a),
            [k, a] if (1..=3).contains(&k) && a <= 3 => Deriv::from_pair(k, a).unwrap(),
            [k, _] if k == 0 || k > 3 => {
                return Err(format!("second-derivative first slot must be spatial (1..=3), got {k}"))
            }
            _ => return Err(format!("invalid derivative descriptor {deriv:?}")),
        };
        Ok(VarRef { component, deriv })
    }

    pub fn order(&self) -> usize {
        self.deriv.order()
    }

    pub fn is_undifferentiated(&self) -> bool {
        self.deriv == Deriv::None
    }

    pub fn differentiate(&self, a: u8) -> Result<VarRef, DerivOverflow> {
        Ok(VarRef { component: self.component, deriv: self.deriv.differentiate(a)? })
    }

    pub fn is_valid(&self) -> bool {
        self.component >= 1 && self.deriv.is_valid()
    }

    pub fn with_component(&self, component: usize) -> VarRef {
        VarRef { component, deriv: self.deriv }
    }
}

/// Expression syntax: `u3`, `d0u3`, `d10u3`.
impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deriv {
            Deriv::None => write!(f, "u{}", self.component),
            Deriv::First(a) => write!(f, "d{}u{}", a, self.component),
            Deriv::Second(k, a) => write!(f, "d{}{}u{}", k, a, self.component),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VarRefJson {
    component: usize,
    deriv: Option<Vec<u8>>,
}

impl Serialize for VarRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let deriv = match self.deriv {
            Deriv::None => None,
            d => Some(d.indices()),
        };
        VarRefJson { component: self.component, deriv }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VarRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = VarRefJson::deserialize(d)?;
        VarRef::try_new(raw.component, raw.deriv.as_deref().unwrap_or(&[]))
            .map_err(serde::de::Error::custom)
    }
}

/// All 14 jet variables of one component, in slot order.
pub fn component_jet(component: usize) -> Vec<VarRef> {
    let mut out = vec![VarRef::value(component)];
    out.extend((0..4).map(|a| VarRef::first(component, a)));
    out.extend(SECOND_SLOTS.iter().map(|&(k, a)| VarRef { component, deriv: Deriv::Second(k, a) }));
    out
}

/// Canonical second-derivative slots.
pub const SECOND_SLOTS: [(u8, u8); 9] =
    [(1, 0), (2, 0), (3, 0), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// Number of jet slots per component.
pub const JET_WIDTH: usize = 14;

/// Slot of a derivative inside one component's jet.
pub fn slot_of(deriv: Deriv) -> usize {
    match deriv {
        Deriv::None => 0,
        Deriv::First(a) => 1 + a as usize,
        Deriv::Second(k, a) => {
            5 + SECOND_SLOTS.iter().position(|&s| s == (k, a)).expect("canonical second derivative")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivatives_are_canonical() {
        assert_eq!(VarRef::second(1, 2, 1), VarRef::second(1, 1, 2));
        assert_eq!(VarRef::second(1, 3, 0).deriv, Deriv::Second(3, 0));
        assert_eq!(Deriv::from_pair(0, 2), Some(Deriv::Second(2, 0)));
        assert_eq!(Deriv::from_pair(0, 0), None);
    }

    #[test]
    fn differentiate_rejects_time_time_and_third_order() {
        assert_eq!(VarRef::first(1, 0).differentiate(0), Err(DerivOverflow::TimeTime));
        assert_eq!(VarRef::second(1, 1, 1).differentiate(2), Err(DerivOverflow::ThirdOrder));
        assert_eq!(VarRef::first(2, 3).differentiate(1).unwrap(), VarRef::second(2, 1, 3));
    }

    #[test]
    fn json_shape() {
        let v = VarRef::second(4, 2, 1);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"component":4,"deriv":[1,2]}"#);
        let back: VarRef = serde_json::from_str(r#"{"component":4,"deriv":[2,1]}"#).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<VarRef>(r#"{"component":1,"deriv":[0,1]}"#).is_err());
        assert!(serde_json::from_str::<VarRef>(r#"{"component":0,"deriv":null}"#).is_err());
    }

    #[test]
    fn slots_cover_jet() {
        let jet = component_jet(3);
        assert_eq!(jet.len(), JET_WIDTH);
        for (i, v) in jet.iter().enumerate() {
            assert_eq!(slot_of(v.deriv), i);
        }
    }
}
