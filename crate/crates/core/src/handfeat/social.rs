use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusError, PhysicianProfile, QaPair};

pub const SF_COUNT: usize = 26;
pub const SF_NAMES: [&str; SF_COUNT] = [
    "sf1", "sf2", "sf3", "sf4", "sf5", "sf6", "sf7", "sf8", "sf9", "sf10", "sf11", "sf12", "sf13", "sf14", "sf15",
    "sf16", "sf17", "sf18", "sf19", "sf20", "sf21", "sf22", "sf23", "sf24", "sf25", "sf26",
];

/// `values[i]` is `sf{i+1}`; masked entries hold 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocialFeatures {
    pub values: [f64; SF_COUNT],
    pub missing_mask: [bool; SF_COUNT],
}

impl SocialFeatures {
    /// 1-based accessor matching the catalogue numbering.
    pub fn sf(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn is_missing(&self, n: usize) -> bool {
        self.missing_mask[n - 1]
    }
}

pub fn social_features(
    profile: Option<&PhysicianProfile>,
    qa: &QaPair,
    collection_time: i64,
    launch_time: i64,
) -> Result<SocialFeatures, CorpusError> {
    qa.validate()?;
    let Some(p) = profile else {
        return Ok(SocialFeatures {
            values: [0.0; SF_COUNT],
            missing_mask: [true; SF_COUNT],
        });
    };
    let count = |v: Option<u64>| v.map(|x| x as f64);
    let raw: [Option<f64>; SF_COUNT] = [
        Some((qa.answer_time - qa.question_time) as f64),
        p.service_rating,
        p.patient_recommendation,
        count(p.thanks_messages),
        count(p.gifts),
        count(p.gift_givers),
        count(p.care_value),
        count(p.contribution_value),
        count(p.total_visits),
        count(p.previous_day_visits),
        count(p.articles),
        count(p.total_patients),
        count(p.registered_outpatients),
        count(p.previous_day_registered_outpatients),
        count(p.wechat_registered_outpatients),
        count(p.patient_votes),
        p.last_online_time.map(|t| (collection_time - t) as f64),
        p.joining_time.map(|t| (t - launch_time) as f64),
        p.grade.map(|g| g.ordinal() as f64),
        p.hospital_grade.map(|g| g.ordinal() as f64),
        p.education.map(|g| g.ordinal() as f64),
        p.telephone_service.map(|b| if b { 1.0 } else { 0.0 }),
        p.telephone_effect_satisfaction,
        count(p.telephone_consultations),
        p.telephone_attitude_satisfaction,
        count(p.qr_communications),
    ];
    let mut out = SocialFeatures {
        values: [0.0; SF_COUNT],
        missing_mask: [false; SF_COUNT],
    };
    for (i, v) in raw.iter().enumerate() {
        match v {
            Some(x) => out.values[i] = *x,
            None => out.missing_mask[i] = true,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{EducationGrade, HospitalGrade, PhysicianGrade};
    use crate::corpus::Label;

    fn qa(q: i64, a: i64) -> QaPair {
        QaPair {
            id: "x".into(),
            question_text: "q".into(),
            answer_text: "a".into(),
            label: Label::Low,
            physician_id: "p".into(),
            question_time: q,
            answer_time: a,
        }
    }

    #[test]
    fn equal_times_give_zero_gap() {
        let p = PhysicianProfile::new("p");
        let f = social_features(Some(&p), &qa(100, 100), 0, 0).unwrap();
        assert_eq!(f.sf(1), 0.0);
        assert!(!f.is_missing(1));
        assert!(f.is_missing(2));
    }

    #[test]
    fn missing_profile_masks_everything() {
        let f = social_features(None, &qa(0, 50), 0, 0).unwrap();
        assert_eq!(f.values, [0.0; SF_COUNT]);
        assert_eq!(f.missing_mask, [true; SF_COUNT]);
    }

    #[test]
    fn reversed_times_are_rejected() {
        assert!(social_features(None, &qa(10, 5), 0, 0).is_err());
    }

    #[test]
    fn catalogue_positions() {
        let mut p = PhysicianProfile::new("p");
        p.grade = PhysicianGrade::from_name("chief physician");
        p.hospital_grade = HospitalGrade::new(6);
        p.education = EducationGrade::new(2);
        p.total_patients = Some(321);
        p.total_visits = Some(9);
        p.last_online_time = Some(900);
        p.joining_time = Some(1_500);
        p.telephone_service = Some(true);
        p.service_rating = Some(0.75);
        p.qr_communications = Some(4);
        let f = social_features(Some(&p), &qa(10, 70), 1_000, 1_000).unwrap();
        assert_eq!(f.sf(1), 60.0);
        assert_eq!(f.sf(2), 0.75);
        assert_eq!(f.sf(9), 9.0);
        assert_eq!(f.sf(12), 321.0);
        assert_eq!(f.sf(17), 100.0);
        assert_eq!(f.sf(18), 500.0);
        assert_eq!(f.sf(19), 4.0);
        assert_eq!(f.sf(20), 6.0);
        assert_eq!(f.sf(21), 2.0);
        assert_eq!(f.sf(22), 1.0);
        assert_eq!(f.sf(26), 4.0);
        assert!(f.is_missing(3) && f.values[2] == 0.0);
    }
}
