use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mix::{synthetic_mix, MixSpec, SyntheticMix};
use crate::align::{serialize_srt, SubtitleEntry};
use crate::baselines::{write_features_binary, FeatureKind, FeatureRecord, FeatureVector};
use crate::corpus::{snippet_id, Source};
use crate::signal::write_wav_i16;
use crate::TimeInterval;

pub const FIXTURE_FEATURE_DIM: usize = 32;

/// A visual "class": one verb with the objects and locations it occurs
/// with, and a sentence template over `{S}`, `{O}`, `{L}`.
struct Archetype {
    verb: &'static str,
    objects: &'static [&'static str],
    locations: &'static [&'static str],
    template: &'static str,
}

const ARCHETYPES: [Archetype; 12] = [
    Archetype { verb: "read", objects: &["letter", "book", "envelope"], locations: &[], template: "{S} reads the {O}." },
    Archetype { verb: "hold", objects: &["cup", "bag", "phone"], locations: &[], template: "{S} holds the {O}." },
    Archetype { verb: "drink", objects: &["coffee"], locations: &[], template: "{S} drinks the {O}." },
    Archetype { verb: "take", objects: &["envelope", "book", "bag"], locations: &["office", "kitchen"], template: "{S} takes the {O} from the {L}." },
    Archetype { verb: "put", objects: &["book", "cup", "bag"], locations: &["table", "bench", "bed"], template: "{S} puts the {O} on the {L}." },
    Archetype { verb: "walk", objects: &[], locations: &["street", "hallway", "garden"], template: "{S} walks down the {L}." },
    Archetype { verb: "run", objects: &[], locations: &["garden", "kitchen", "house"], template: "{S} runs into the {L}." },
    Archetype { verb: "enter", objects: &[], locations: &["room", "office", "kitchen"], template: "{S} enters the {L}." },
    Archetype { verb: "look", objects: &["car", "window", "door"], locations: &[], template: "{S} looks at the {O}." },
    Archetype { verb: "open", objects: &["door", "window", "bag"], locations: &[], template: "{S} opens the {O}." },
    Archetype { verb: "sit", objects: &[], locations: &["bench", "bed", "chair"], template: "{S} sits on the {L}." },
    Archetype { verb: "close", objects: &["door", "window"], locations: &[], template: "{S} closes the {O}." },
];

const SUBJECTS: [&str; 3] = ["Someone", "He", "She"];

/// (archetype, object, location, narration, script wording)
const TEST_SCENES: [(usize, &str, &str, &str, &str); 8] = [
    (9, "door", "", "Abby opens the door.", "Abby slowly opens the front door."),
    (5, "", "hallway", "Mike walks down the hallway.", "Mike walks down the long hallway."),
    (4, "cup", "table", "Abby puts the cup on the table.", "Abby puts her cup down on the table."),
    (0, "letter", "", "Mike reads the letter.", "Mike reads the letter again."),
    (10, "", "bench", "Abby sits on the bench.", "Abby sits down on the old bench."),
    (3, "bag", "kitchen", "Mike takes the bag from the kitchen.", "Mike grabs the bag from the kitchen."),
    (8, "window", "", "Abby looks at the window.", "Abby stares at the dark window."),
    (11, "door", "", "Mike closes the door.", "Mike closes the door behind him."),
];

const DIALOGUE: [(&str, &str); 16] = [
    ("ABBY", "Did you hear that noise outside just now?"),
    ("MIKE", "It was only the wind against the shutters."),
    ("ABBY", "You always say that when something is wrong."),
    ("MIKE", "Because nothing is ever wrong in this town."),
    ("ABBY", "Then why did you lock every window last night?"),
    ("MIKE", "Habit, I suppose. Old habits from the city."),
    ("ABBY", "The letter came this morning with no stamp."),
    ("MIKE", "Somebody delivered it by hand then."),
    ("ABBY", "I need a minute to think about all of this."),
    ("MIKE", "Take as long as you need, I will wait here."),
    ("ABBY", "There was a bag in the kitchen I never saw before."),
    ("MIKE", "Maybe the neighbours left it for us yesterday."),
    ("ABBY", "Someone is standing by the gate again."),
    ("MIKE", "Stay away from the glass and keep quiet."),
    ("ABBY", "We should have left this house weeks ago."),
    ("MIKE", "Tomorrow we go, first thing, I promise you."),
];

#[derive(Debug, Clone)]
pub struct FixtureSpec {
    pub seed: u64,
    pub duration_s: f64,
    pub train_size: usize,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            duration_s: 120.0,
            train_size: 120,
        }
    }
}

/// A synthetic movie with everything the pipeline consumes: audio tracks,
/// narration transcripts, a screenplay with matching subtitles, a
/// training corpus with features, and classifier scores for the test
/// snippets.
#[derive(Debug, Clone)]
pub struct FixtureMovie {
    pub movie_id: String,
    pub mix: SyntheticMix,
    pub names: Vec<String>,
    pub dvs_sentences: Vec<String>,
    pub script_descriptions: Vec<String>,
    pub script: String,
    pub subtitles: Vec<SubtitleEntry>,
    pub train: Vec<(String, String)>,
    pub train_features: Vec<FeatureRecord<f64>>,
    pub test_features: Vec<FeatureRecord<f64>>,
    /// Per feature family, CSV rows `snippet_id,node,label,score`.
    pub unaries: BTreeMap<String, String>,
    /// CSV rows `snippet_id,class,score` for object and scene detectors.
    pub lsda_scores: String,
    pub places_scores: String,
}

fn fill(template: &str, s: &str, o: &str, l: &str) -> String {
    template.replace("{S}", s).replace("{O}", o).replace("{L}", l)
}

fn feature(rng: &mut ChaCha8Rng, archetype: usize, noise: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..FIXTURE_FEATURE_DIM).map(|_| rng.random_range(0.0..noise)).collect();
    v[2 * archetype] += 1.0;
    v[2 * archetype + 1] += rng.random_range(0.2..0.6);
    let sum: f64 = v.iter().sum();
    v.iter().map(|x| x / sum).collect()
}

fn all_labels(pick: impl Fn(&Archetype) -> Vec<&'static str>) -> Vec<&'static str> {
    let mut v: Vec<&str> = ARCHETYPES.iter().flat_map(pick).collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl FixtureMovie {
    pub fn generate(spec: &FixtureSpec) -> Self {
        let movie_id = "fixture".to_string();
        let mix = synthetic_mix(&MixSpec {
            duration_s: spec.duration_s,
            bursts: TEST_SCENES.len(),
            seed: spec.seed,
            ..MixSpec::default()
        });
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed);

        let subtitles = subtitles_around(&mix.narration);
        let script = screenplay();

        let mut train = Vec::with_capacity(spec.train_size);
        let mut train_features = Vec::with_capacity(spec.train_size);
        for i in 0..spec.train_size {
            let a = i % ARCHETYPES.len();
            let arch = &ARCHETYPES[a];
            let pick = |xs: &[&'static str], rng: &mut ChaCha8Rng| {
                if xs.is_empty() {
                    ""
                } else {
                    xs[rng.random_range(0..xs.len())]
                }
            };
            let o = pick(arch.objects, &mut rng);
            let l = pick(arch.locations, &mut rng);
            let s = SUBJECTS[rng.random_range(0..SUBJECTS.len())];
            let id = format!("train-{i:04}");
            train.push((id.clone(), fill(arch.template, s, o, l)));
            train_features.push(FeatureRecord {
                snippet_id: id,
                vector: FeatureVector::new(FeatureKind::Dt, feature(&mut rng, a, 0.08)).expect("finite"),
            });
        }

        let verbs = all_labels(|a| vec![a.verb]);
        let objects = all_labels(|a| a.objects.to_vec());
        let locations = all_labels(|a| a.locations.to_vec());
        let mut unaries: BTreeMap<String, String> = BTreeMap::new();
        let mut test_features = Vec::new();
        let mut lsda = String::from("snippet_id,class,score\n");
        let mut places = String::from("snippet_id,class,score\n");
        for (i, (a, o, l, _, _)) in TEST_SCENES.iter().enumerate() {
            let id = snippet_id(&movie_id, Source::Dvs, i);
            test_features.push(FeatureRecord {
                snippet_id: id.clone(),
                vector: FeatureVector::new(FeatureKind::Dt, feature(&mut rng, *a, 0.08)).expect("finite"),
            });
            // DT is good at verbs, LSDA at objects, PLACES at scenes
            for (family, strengths) in [("dt", [1.5, 0.5, 0.5]), ("lsda", [0.5, 1.5, 0.3]), ("places", [0.3, 0.3, 1.5])] {
                let rows = unaries.entry(family.to_string()).or_insert_with(|| "snippet_id,node,label,score\n".into());
                let nodes: [(&str, &[&str], &str); 3] =
                    [("verb", &verbs, ARCHETYPES[*a].verb), ("object", &objects, o), ("location", &locations, l)];
                for ((node, labels, truth), strength) in nodes.into_iter().zip(strengths) {
                    for label in labels.iter() {
                        let bonus = if *label == truth { strength } else { 0.0 };
                        let score = bonus + rng.random_range(0.0..0.6);
                        rows.push_str(&format!("{id},{node},{label},{score:.4}\n"));
                    }
                }
            }
            for class in ["person", "dog", "car", "door", "cup", "bag", "window", "letter"] {
                let truth = class == "person" || class == *o;
                let score = if truth { 0.6 } else { 0.0 } + rng.random_range(0.0..0.4);
                lsda.push_str(&format!("{id},{class},{score:.4}\n"));
            }
            for scene in ["kitchen", "hallway", "street", "office", "garden"] {
                let score = if scene == *l { 0.6 } else { 0.0 } + rng.random_range(0.0..0.4);
                places.push_str(&format!("{id},{scene},{score:.4}\n"));
            }
        }

        Self {
            movie_id,
            mix,
            names: vec!["Abby".into(), "Mike".into()],
            dvs_sentences: TEST_SCENES.iter().map(|t| t.3.to_string()).collect(),
            script_descriptions: TEST_SCENES.iter().map(|t| t.4.to_string()).collect(),
            script,
            subtitles,
            train,
            train_features,
            test_features,
            unaries,
            lsda_scores: lsda,
            places_scores: places,
        }
    }

    /// Write the bundle as plain files into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let wav_err = |e: crate::signal::SignalError| io::Error::other(e.to_string());
        write_wav_i16(&self.mix.original, dir.join("original.wav")).map_err(wav_err)?;
        write_wav_i16(&self.mix.mixed, dir.join("mixed.wav")).map_err(wav_err)?;
        let lines = |v: &[String]| v.iter().map(|s| format!("{s}\n")).collect::<String>();
        std::fs::write(dir.join("dvs.txt"), lines(&self.dvs_sentences))?;
        std::fs::write(dir.join("names.txt"), lines(&self.names))?;
        std::fs::write(dir.join("script.txt"), &self.script)?;
        std::fs::write(dir.join("subtitles.srt"), serialize_srt(&self.subtitles))?;
        let train: String = self
            .train
            .iter()
            .map(|(id, s)| format!("{}\n", serde_json::json!({"id": id, "sentence": s})))
            .collect();
        std::fs::write(dir.join("train.jsonl"), train)?;
        for (name, records) in [("train_features.mdfv", &self.train_features), ("test_features.mdfv", &self.test_features)] {
            let mut buf = Vec::new();
            write_features_binary(records, &mut buf)?;
            std::fs::write(dir.join(name), buf)?;
        }
        for (family, csv) in &self.unaries {
            std::fs::write(dir.join(format!("unaries_{family}.csv")), csv)?;
        }
        std::fs::write(dir.join("lsda.csv"), &self.lsda_scores)?;
        std::fs::write(dir.join("places.csv"), &self.places_scores)?;
        let truth: String = self
            .mix
            .narration
            .iter()
            .map(|iv| format!("{:.6}\t{:.6}\n", iv.start_s(), iv.end_s()))
            .collect();
        std::fs::write(dir.join("narration_truth.tsv"), truth)?;
        Ok(())
    }
}

/// Two dialogue lines per narration burst: one ending where it starts,
/// one starting where it ends.
fn subtitles_around(narration: &[TimeInterval]) -> Vec<SubtitleEntry> {
    let mut out = Vec::with_capacity(2 * narration.len());
    let ms = |t: f64| (t * 1000.0).round() / 1000.0;
    for (i, burst) in narration.iter().enumerate() {
        let before_start = if i == 0 {
            (burst.start_s() - 2.0).max(0.0)
        } else {
            let prev = narration[i - 1].end_s();
            prev + 0.6 * (burst.start_s() - prev)
        };
        let after_end = match narration.get(i + 1) {
            Some(next) => burst.end_s() + 0.4 * (next.start_s() - burst.end_s()),
            None => burst.end_s() + 2.0,
        };
        for (k, span) in [(before_start, burst.start_s()), (burst.end_s(), after_end)].into_iter().enumerate() {
            let n = out.len();
            out.push(SubtitleEntry {
                index: n as u32 + 1,
                interval: TimeInterval::new(ms(span.0), ms(span.1)).expect("ordered subtitle span"),
                text: DIALOGUE[2 * i + k].1.to_string(),
            });
        }
    }
    out
}

fn screenplay() -> String {
    let mut s = String::from("INT. FARMHOUSE - NIGHT\n\n");
    for (i, scene) in TEST_SCENES.iter().enumerate() {
        for (k, (speaker, line)) in DIALOGUE[2 * i..2 * i + 2].iter().enumerate() {
            s.push_str(&format!("                    {speaker}\n          {line}\n\n"));
            if k == 0 {
                s.push_str(scene.4);
                s.push_str("\n\n");
            }
        }
    }
    s
}
