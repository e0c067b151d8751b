//! Kodaira fibre types in residue characteristic 0.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    /// `I_n`, with `I_0` smooth.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Reads the type from `(v(c4), v(c6), v(disc))` of a minimal model; `None` for an
    /// inconsistent triple. `None` valuations stand for a vanishing invariant.
    pub fn from_valuations(v4: Option<u32>, v6: Option<u32>, vd: u32) -> Option<Self> {
        const INF: u32 = u32::MAX;
        let (a, b) = (v4.unwrap_or(INF), v6.unwrap_or(INF));
        if vd == 0 {
            return Some(KodairaType::I(0));
        }
        if a == 0 {
            return (b == 0).then_some(KodairaType::I(vd));
        }
        let t = match vd {
            2 if b == 1 => KodairaType::II,
            3 if a == 1 && b >= 2 => KodairaType::III,
            4 if a >= 2 && b == 2 => KodairaType::IV,
            6 if a >= 2 && b >= 3 => KodairaType::IStar(0),
            n if n > 6 && a == 2 && b == 3 => KodairaType::IStar(n - 6),
            8 if a >= 3 && b == 4 => KodairaType::IVStar,
            9 if a == 3 && b >= 5 => KodairaType::IIIStar,
            10 if a >= 4 && b == 5 => KodairaType::IIStar,
            _ => return None,
        };
        Some(t)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        Some(match s {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                let rest = s.strip_prefix('I')?;
                match rest.strip_suffix('*') {
                    Some(n) => KodairaType::IStar(n.parse().ok()?),
                    None => KodairaType::I(rest.parse().ok()?),
                }
            }
        })
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(n) if n > 0)
    }

    /// Number of irreducible components `m_v`.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => 5 + n,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn rank_contribution(self) -> u32 {
        self.components() - 1
    }

    /// Order of the component group, i.e. the discriminant of the fibre root lattice.
    pub fn group_order(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::II | KodairaType::IIStar => 1,
            KodairaType::III | KodairaType::IIIStar => 2,
            KodairaType::IV | KodairaType::IVStar => 3,
            KodairaType::IStar(_) => 4,
        }
    }

    /// Invariant factors of the component group; `I_n^*` has `(Z/2)^2` for even `n`, `Z/4` for odd.
    pub fn component_group(self) -> Vec<u32> {
        match self {
            KodairaType::IStar(n) if n % 2 == 0 => vec![2, 2],
            t if t.group_order() > 1 => vec![t.group_order()],
            _ => Vec::new(),
        }
    }

    /// Euler number, equal to `v(disc)` in characteristic 0.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => 6 + n,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Root lattice spanned by the non-identity components, as a `build_lattice` name.
    pub fn root_lattice(self) -> Option<String> {
        match self {
            KodairaType::I(0) | KodairaType::I(1) | KodairaType::II => None,
            KodairaType::I(n) => Some(format!("A{}", n - 1)),
            KodairaType::III => Some("A1".into()),
            KodairaType::IV => Some("A2".into()),
            KodairaType::IStar(n) => Some(format!("D{}", n + 4)),
            KodairaType::IVStar => Some("E6".into()),
            KodairaType::IIIStar => Some("E7".into()),
            KodairaType::IIStar => Some("E8".into()),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        KodairaType::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown Kodaira type `{s}`")))
    }
}

/// A classified fibre: type plus the split flag for multiplicative types when decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KodairaFiber {
    #[serde(rename = "type")]
    pub kind: KodairaType,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<bool>,
}

impl KodairaFiber {
    pub fn new(kind: KodairaType) -> Self {
        Self { kind, split: None }
    }

    pub fn components(&self) -> u32 {
        self.kind.components()
    }

    pub fn rank_contribution(&self) -> u32 {
        self.kind.rank_contribution()
    }

    pub fn group_order(&self) -> u32 {
        self.kind.group_order()
    }

    pub fn euler(&self) -> u32 {
        self.kind.euler()
    }
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        match self.split {
            Some(true) => f.write_str(" (split)"),
            Some(false) => f.write_str(" (non-split)"),
            None => Ok(()),
        }
    }
}
