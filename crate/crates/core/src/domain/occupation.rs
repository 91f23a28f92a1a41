use super::slug_enum;

/// Closed occupational taxonomy for honorees, derived from ISCO major and
/// sub-major groups. `Other` absorbs occupations that map nowhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OccupationGroup {
    Legislators,
    Writers,
    CreativePerformingArtists,
    ScienceEngineeringProfessionals,
    HealthAssociateProfessionals,
    Sportsmen,
    SocialWorkers,
    TeachingProfessionals,
    Businessmen,
    CraftTradesWorkers,
    LegalSocialProfessionals,
    ReligionRepresentatives,
    MilitaryPersonnel,
    Royals,
    Politicians,
    RespondersVictims911,
    Other,
}

slug_enum!(OccupationGroup, "occupation group", {
    Legislators => "legislators",
    Writers => "writers",
    CreativePerformingArtists => "creative_performing_artists",
    ScienceEngineeringProfessionals => "science_engineering_professionals",
    HealthAssociateProfessionals => "health_associate_professionals",
    Sportsmen => "sportsmen",
    SocialWorkers => "social_workers",
    TeachingProfessionals => "teaching_professionals",
    Businessmen => "businessmen",
    CraftTradesWorkers => "craft_trades_workers",
    LegalSocialProfessionals => "legal_social_professionals",
    ReligionRepresentatives => "religion_representatives",
    MilitaryPersonnel => "military_personnel",
    Royals => "royals",
    Politicians => "politicians",
    RespondersVictims911 => "responders_victims_911",
    Other => "other",
});

impl OccupationGroup {
    /// Human readable group name as shown in legends and pop-ups.
    pub fn label(&self) -> &'static str {
        match self {
            OccupationGroup::Legislators => "legislators",
            OccupationGroup::Writers => "writers",
            OccupationGroup::CreativePerformingArtists => "creative and performing artists",
            OccupationGroup::ScienceEngineeringProfessionals => {
                "science and engineering professionals"
            }
            OccupationGroup::HealthAssociateProfessionals => "health associate professionals",
            OccupationGroup::Sportsmen => "sportsmen",
            OccupationGroup::SocialWorkers => "social workers",
            OccupationGroup::TeachingProfessionals => "teaching professionals",
            OccupationGroup::Businessmen => "businessmen",
            OccupationGroup::CraftTradesWorkers => "craft and related trades workers",
            OccupationGroup::LegalSocialProfessionals => "legal and social professionals",
            OccupationGroup::ReligionRepresentatives => "religion representatives",
            OccupationGroup::MilitaryPersonnel => "military personnel",
            OccupationGroup::Royals => "royals",
            OccupationGroup::Politicians => "politicians",
            OccupationGroup::RespondersVictims911 => "9-11 responders and victims",
            OccupationGroup::Other => "other",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_groups() {
        assert_eq!(OccupationGroup::ALL.len(), 17);
        let mut slugs: Vec<_> = OccupationGroup::ALL.iter().map(|g| g.as_str()).collect();
        slugs.sort();
        slugs.dedup();
        assert_eq!(slugs.len(), 17);
    }

    #[test]
    fn slug_round_trip() {
        for g in OccupationGroup::ALL {
            assert_eq!(g.as_str().parse::<OccupationGroup>().unwrap(), *g);
        }
        assert!("painters".parse::<OccupationGroup>().is_err());
    }

    #[test]
    fn exhaustive_match() {
        // Adding a member breaks this match at compile time.
        for g in OccupationGroup::ALL {
            let creative = match g {
                OccupationGroup::Writers | OccupationGroup::CreativePerformingArtists => true,
                OccupationGroup::Legislators
                | OccupationGroup::ScienceEngineeringProfessionals
                | OccupationGroup::HealthAssociateProfessionals
                | OccupationGroup::Sportsmen
                | OccupationGroup::SocialWorkers
                | OccupationGroup::TeachingProfessionals
                | OccupationGroup::Businessmen
                | OccupationGroup::CraftTradesWorkers
                | OccupationGroup::LegalSocialProfessionals
                | OccupationGroup::ReligionRepresentatives
                | OccupationGroup::MilitaryPersonnel
                | OccupationGroup::Royals
                | OccupationGroup::Politicians
                | OccupationGroup::RespondersVictims911
                | OccupationGroup::Other => false,
            };
            assert_eq!(creative, g.label().contains("writer") || g.label().contains("artist"));
        }
    }
}
