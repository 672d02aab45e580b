//! Raw physician profile attributes behind the social features sf2–sf26.

use std::convert::TryFrom;

use serde::{Deserialize, Serialize};

#[derive(Deserialize)]
#[serde(untagged)]
enum OrdinalRepr {
    Index(i64),
    Name(String),
}

fn normalize_name(name: &str) -> String {
    name.trim()
        .to_lowercase()
        .replace(['_', '-'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

macro_rules! ordinal_scale {
    ($(#[$doc:meta])* $name:ident, [$($level:literal),+ $(,)?]) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(try_from = "OrdinalRepr", into = "u8")]
        pub struct $name(u8);

        impl $name {
            /// Level names in ascending order; position is the ordinal.
            pub const LEVELS: &'static [&'static str] = &[$($level),+];
            pub const MAX: u8 = (Self::LEVELS.len() - 1) as u8;

            pub fn new(ordinal: u8) -> Option<Self> {
                (ordinal <= Self::MAX).then_some(Self(ordinal))
            }

            pub fn from_name(name: &str) -> Option<Self> {
                let wanted = normalize_name(name);
                if wanted == "no grade" {
                    return Some(Self(0));
                }
                Self::LEVELS
                    .iter()
                    .position(|l| *l == wanted)
                    .map(|i| Self(i as u8))
            }

            pub fn ordinal(self) -> u8 {
                self.0
            }
        }

        impl TryFrom<OrdinalRepr> for $name {
            type Error = String;

            fn try_from(repr: OrdinalRepr) -> Result<Self, String> {
                match repr {
                    OrdinalRepr::Index(i) => u8::try_from(i)
                        .ok()
                        .and_then(Self::new)
                        .ok_or_else(|| format!("{} ordinal {} outside 0..={}", stringify!($name), i, Self::MAX)),
                    OrdinalRepr::Name(s) => Self::from_name(&s)
                        .ok_or_else(|| format!("unknown {} level {:?}", stringify!($name), s)),
                }
            }
        }

        impl From<$name> for u8 {
            fn from(v: $name) -> u8 {
                v.0
            }
        }
    };
}

ordinal_scale!(
    /// Professional title (sf19), 0–4.
    PhysicianGrade,
    ["none", "hospital physician", "physician", "associate chief physician", "chief physician"]
);

ordinal_scale!(
    /// Hospital grade (sf20), 0–6.
    HospitalGrade,
    [
        "none",
        "grade one",
        "grade one first class",
        "grade two",
        "grade two first class",
        "grade three",
        "grade three first class",
    ]
);

ordinal_scale!(
    /// Academic title (sf21), 0–4.
    EducationGrade,
    ["none", "assistant", "lecturer", "associate professor", "professor"]
);

/// Raw attributes of one physician. Every attribute is optional; an absent
/// key is a missing value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicianProfile {
    pub physician_id: String,
    /// sf2, fraction in [0,1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub service_rating: Option<f64>,
    /// sf3, non-negative score.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patient_recommendation: Option<f64>,
    /// sf4
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thanks_messages: Option<u64>,
    /// sf5
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gifts: Option<u64>,
    /// sf6
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gift_givers: Option<u64>,
    /// sf7
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub care_value: Option<u64>,
    /// sf8
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contribution_value: Option<u64>,
    /// sf9
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_visits: Option<u64>,
    /// sf10
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub previous_day_visits: Option<u64>,
    /// sf11
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub articles: Option<u64>,
    /// sf12
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_patients: Option<u64>,
    /// sf13
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registered_outpatients: Option<u64>,
    /// sf14
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub previous_day_registered_outpatients: Option<u64>,
    /// sf15
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wechat_registered_outpatients: Option<u64>,
    /// sf16
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patient_votes: Option<u64>,
    /// sf17 anchor, epoch seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_online_time: Option<i64>,
    /// sf18 anchor, epoch seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joining_time: Option<i64>,
    /// sf19
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<PhysicianGrade>,
    /// sf20
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hospital_grade: Option<HospitalGrade>,
    /// sf21
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub education: Option<EducationGrade>,
    /// sf22
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telephone_service: Option<bool>,
    /// sf23, fraction in [0,1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telephone_effect_satisfaction: Option<f64>,
    /// sf24
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telephone_consultations: Option<u64>,
    /// sf25, fraction in [0,1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telephone_attitude_satisfaction: Option<f64>,
    /// sf26
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qr_communications: Option<u64>,
}

impl PhysicianProfile {
    pub fn new(physician_id: impl Into<String>) -> Self {
        PhysicianProfile {
            physician_id: physician_id.into(),
            ..Default::default()
        }
    }

    /// Range checks that serde cannot express.
    pub fn validate(&self) -> Result<(), String> {
        let fractions = [
            ("service_rating", self.service_rating),
            ("telephone_effect_satisfaction", self.telephone_effect_satisfaction),
            ("telephone_attitude_satisfaction", self.telephone_attitude_satisfaction),
        ];
        for (name, value) in fractions {
            if let Some(v) = value {
                if !(0.0..=1.0).contains(&v) {
                    return Err(format!("{name} = {v} outside [0,1]"));
                }
            }
        }
        if let Some(v) = self.patient_recommendation {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("patient_recommendation = {v} must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_parse_from_names_and_ordinals() {
        let p: PhysicianProfile = serde_json::from_str(
            r#"{"physician_id":"d","grade":"chief physician","hospital_grade":6,"education":"Associate_Professor"}"#,
        )
        .unwrap();
        assert_eq!(p.grade.unwrap().ordinal(), 4);
        assert_eq!(p.hospital_grade.unwrap().ordinal(), 6);
        assert_eq!(p.education.unwrap().ordinal(), 3);
        assert_eq!(PhysicianGrade::from_name("no grade").unwrap().ordinal(), 0);
    }

    #[test]
    fn out_of_range_ordinals_are_rejected() {
        assert!(serde_json::from_str::<PhysicianProfile>(r#"{"physician_id":"d","grade":5}"#).is_err());
        assert!(serde_json::from_str::<PhysicianProfile>(r#"{"physician_id":"d","hospital_grade":7}"#).is_err());
        assert!(serde_json::from_str::<PhysicianProfile>(r#"{"physician_id":"d","education":-1}"#).is_err());
        assert!(serde_json::from_str::<PhysicianProfile>(r#"{"physician_id":"d","gifts":-3}"#).is_err());
    }

    #[test]
    fn fractions_are_range_checked() {
        let mut p = PhysicianProfile::new("d");
        p.service_rating = Some(1.5);
        assert!(p.validate().is_err());
        p.service_rating = Some(0.9);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn absent_keys_round_trip_as_missing() {
        let p = PhysicianProfile::new("d");
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"physician_id":"d"}"#);
        let back: PhysicianProfile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
