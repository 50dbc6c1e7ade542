#include "pitchml/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::ofstream& out, uint32_t v) {
  uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                  static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u16(std::ofstream& out, uint16_t v) {
  uint8_t b[2] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

Waveform load_waveform(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open WAV file: " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("not a RIFF/WAVE file: " + path);
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const uint8_t* data = nullptr;
  size_t data_size = 0;
  bool have_fmt = false;

  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const uint8_t* chunk = buf.data() + pos;
    uint32_t size = read_u32(chunk + 4);
    const uint8_t* body = chunk + 8;
    if (pos + 8 + size > buf.size()) size = static_cast<uint32_t>(buf.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = body;
      data_size = size;
    }
    pos += 8 + size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw ValidationError("WAV file missing fmt or data chunk: " + path);
  if (channels != 1)
    throw ValidationError("multi-channel WAV not supported (" +
                          std::to_string(channels) + " channels): " + path);
  if (sample_rate == 0) throw ValidationError("WAV sample rate is zero: " + path);

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  if (format == 1 && bits == 16) {
    size_t n = data_size / 2;
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t s = static_cast<int16_t>(read_u16(data + 2 * i));
      w.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    size_t n = data_size / 4;
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      uint32_t u = read_u32(data + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      w.samples[i] = static_cast<double>(f);
    }
  } else {
    throw ValidationError("unsupported WAV encoding (format " + std::to_string(format) +
                          ", " + std::to_string(bits) + " bit): " + path);
  }

  for (double s : w.samples) {
    if (!std::isfinite(s)) throw ValidationError("WAV contains non-finite samples: " + path);
  }
  return w;
}

void save_waveform(const std::string& path, const Waveform& w) {
  if (w.sample_rate <= 0) throw ValidationError("waveform sample rate must be positive");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write WAV file: " + path);

  uint32_t data_size = static_cast<uint32_t>(w.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(w.sample_rate));
  write_u32(out, static_cast<uint32_t>(w.sample_rate) * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_size);
  for (double s : w.samples) {
    double c = std::clamp(s, -1.0, 1.0);
    int v = static_cast<int>(std::lround(c * 32767.0));
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  if (!out) throw RuntimeError("short write on WAV file: " + path);
}

}  // namespace pitchml
