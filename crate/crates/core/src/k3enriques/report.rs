//! One report per form, collecting the CM, pencil, Enriques and field data.

use super::classify::{
    base_change_enriques, enriques_admissible, fields_report, kummer_sandwich, FieldReport,
    KummerSandwich, Verdict,
};
use super::cm::{cm_points, CmPoints};
use super::inose::{inose_pencil, InoseData};
use super::K3Error;
use crate::bqf::{reduce, BinaryQuadraticForm};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldClaim {
    pub field: String,
    pub conjectural: bool,
    /// Rule the claim rests on.
    pub anchor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct K3EnriquesReport {
    pub form: BinaryQuadraticForm,
    #[serde(with = "crate::intser")]
    pub d: BigInt,
    pub is_kummer: bool,
    pub enriques_admissible: bool,
    pub admissibility_reason: String,
    pub base_change_involution: Verdict,
    pub base_change_mechanism: String,
    pub exception_flag: bool,
    /// `None` for imprimitive forms, where the pencil is read off the primitive part's sandwich.
    pub cm: Option<CmPoints>,
    pub inose: Option<InoseData>,
    pub fields: FieldReport,
    pub kummer: KummerSandwich,
    pub ns_over: FieldClaim,
    pub enriques_ns_over: FieldClaim,
}

pub fn enriques_report(q: &BinaryQuadraticForm, bits: usize) -> Result<K3EnriquesReport, K3Error> {
    let form = reduce(q).form;
    let d = form.discriminant();
    let adm = enriques_admissible(&form);
    let bc = base_change_enriques(&form)?;
    if bc.verdict != Verdict::No && !adm.admissible {
        return Err(K3Error::Internal(format!(
            "base change involution on inadmissible {form}"
        )));
    }
    let (cm, inose) = if form.is_primitive() {
        (Some(cm_points(&form)?), Some(inose_pencil(&form, bits)?))
    } else {
        (None, None)
    };
    let kummer = kummer_sandwich(&form);
    Ok(K3EnriquesReport {
        is_kummer: kummer.is_kummer,
        enriques_admissible: adm.admissible,
        admissibility_reason: adm.reason,
        exception_flag: bc.verdict == Verdict::Exception,
        base_change_involution: bc.verdict,
        base_change_mechanism: bc.mechanism,
        cm,
        inose,
        fields: fields_report(&form)?,
        kummer,
        ns_over: FieldClaim {
            field: format!("H({d})"),
            conjectural: false,
            anchor: "X and NS(X) are defined over the ring class field H(d)".into(),
        },
        enriques_ns_over: FieldClaim {
            field: format!("H({})", &d * 4),
            conjectural: true,
            anchor: "Y with NS(Y) expected over H(4d); B lies in H(4d)".into(),
        },
        form,
        d,
    })
}
