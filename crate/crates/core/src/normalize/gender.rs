use crate::domain::Gender;

const FEMALE: &[&str] = &[
    "female", "f", "w", "woman", "women", "girl", "lady", "feminine", "trans woman",
    "transgender female", "weiblich", "frau", "femme", "féminin", "feminin",
];

const MALE: &[&str] = &[
    "male", "m", "man", "men", "boy", "gentleman", "masculine", "trans man",
    "transgender male", "männlich", "maennlich", "mann", "homme", "masculin",
];

/// Case-insensitive synonym lookup; anything unrecognized is `unknown`.
pub fn normalize_gender(raw: &str) -> Gender {
    let key = raw.trim().to_lowercase();
    if FEMALE.contains(&key.as_str()) {
        Gender::Female
    } else if MALE.contains(&key.as_str()) {
        Gender::Male
    } else {
        Gender::Unknown
    }
}
