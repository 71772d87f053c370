use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{AudioTrack, SignalError};
use crate::Real;

/// Read a 16-bit PCM or 32-bit float WAV file, downmixing to mono.
pub fn read_wav<T: Real>(path: impl AsRef<Path>) -> Result<AudioTrack<T>, SignalError> {
    let mut reader = WavReader::open(path)?;
    let spec = reader.spec();
    let interleaved: Vec<T> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| T::from_f64_lossy(v as f64 / 32768.0)))
            .collect::<Result<_, _>>()?,
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| T::from_f64_lossy(v as f64)))
            .collect::<Result<_, _>>()?,
        (fmt, bits) => {
            return Err(SignalError::InvalidParameter(format!(
                "unsupported wav encoding {fmt:?} {bits}-bit"
            )))
        }
    };
    AudioTrack::from_interleaved(&interleaved, spec.channels as usize, spec.sample_rate)
}

/// Write a mono 16-bit PCM WAV file; samples are clipped to [-1, 1].
pub fn write_wav_i16<T: Real>(
    track: &AudioTrack<T>,
    path: impl AsRef<Path>,
) -> Result<(), SignalError> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: track.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut writer = WavWriter::create(path, spec)?;
    for &s in &track.samples {
        let v = s.to_f64_lossy().clamp(-1.0, 1.0);
        writer.write_sample((v * 32767.0).round() as i16)?;
    }
    writer.finalize()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i16_round_trip_and_stereo_downmix() {
        let dir = tempfile::tempdir().unwrap();
        let mono = dir.path().join("mono.wav");
        let track = AudioTrack::new(vec![0.0f64, 0.5, -0.5, 0.25], 8000).unwrap();
        write_wav_i16(&track, &mono).unwrap();
        let back: AudioTrack<f64> = read_wav(&mono).unwrap();
        assert_eq!(back.sample_rate, 8000);
        for (a, b) in back.samples.iter().zip(&track.samples) {
            assert!((a - b).abs() < 1e-4);
        }

        let stereo = dir.path().join("stereo.wav");
        let spec = WavSpec {
            channels: 2,
            sample_rate: 8000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        };
        let mut w = WavWriter::create(&stereo, spec).unwrap();
        for v in [1.0f32, 0.0, 0.5, -0.5] {
            w.write_sample(v).unwrap();
        }
        w.finalize().unwrap();
        let back: AudioTrack<f32> = read_wav(&stereo).unwrap();
        assert_eq!(back.samples, vec![0.5, 0.0]);
    }
}
