#include "ofqr/qr_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ofqr::qr {

namespace {

// ---- GF(256), field polynomial 0x11D, generator alpha = 2 ----

struct Gf256 {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};

  Gf256() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = std::uint8_t(x);
      log[x] = std::uint8_t(i);
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
  }

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp[log[a] + log[b]];
  }

  std::uint8_t div(std::uint8_t a, std::uint8_t b) const {
    // b != 0 required
    if (a == 0) return 0;
    return exp[log[a] + 255 - log[b]];
  }

  std::uint8_t pow_alpha(int e) const {
    e %= 255;
    if (e < 0) e += 255;
    return exp[e];
  }
};

const Gf256& gf() {
  static const Gf256 table;
  return table;
}

// Degree-10 RS generator polynomial, ascending-degree coefficients g[0..10],
// g[10] = 1 (monic): product of (x - alpha^i) for i = 0..9.
const std::array<std::uint8_t, kEccCodewords + 1>& rs_generator() {
  static const auto g = [] {
    std::array<std::uint8_t, kEccCodewords + 1> out{};
    std::vector<std::uint8_t> poly = {1};
    for (int i = 0; i < kEccCodewords; ++i) {
      std::vector<std::uint8_t> next(poly.size() + 1, 0);
      const std::uint8_t root = gf().pow_alpha(i);
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j] ^= gf().mul(poly[j], root);
        next[j + 1] ^= poly[j];
      }
      poly = next;
    }
    for (std::size_t j = 0; j < poly.size(); ++j) out[j] = poly[j];
    return out;
  }();
  return g;
}

// Polynomial evaluation, coefficients in codeword order (highest degree
// first): C(x) = c[0] x^(n-1) + ... + c[n-1].
std::uint8_t poly_eval(const std::uint8_t* c, int n, std::uint8_t x) {
  std::uint8_t acc = 0;
  for (int i = 0; i < n; ++i) acc = std::uint8_t(gf().mul(acc, x) ^ c[i]);
  return acc;
}

}  // namespace

Payload Payload::make(std::string text) {
  if (text.empty() || text.size() > kMaxPayloadBytes)
    throw PayloadTooLong("payload must be 1..14 bytes, got " + std::to_string(text.size()));
  for (unsigned char ch : text)
    if (ch < 0x20 || ch > 0x7E)
      throw NonAsciiByte("payload byte outside printable ASCII: " + std::to_string(int(ch)));
  return Payload{std::move(text)};
}

ModuleGrid QuietGrid::interior() const {
  ModuleGrid g;
  for (int r = 0; r < kModules; ++r)
    for (int c = 0; c < kModules; ++c) g.set(r, c, get(r + kQuietModules, c + kQuietModules));
  return g;
}

QuietGrid QuietGrid::from_interior(const ModuleGrid& g) {
  QuietGrid q;
  for (int r = 0; r < kModules; ++r)
    for (int c = 0; c < kModules; ++c) q.set(r + kQuietModules, c + kQuietModules, g.get(r, c));
  return q;
}

std::array<std::uint8_t, kEccCodewords> rs_encode(
    const std::array<std::uint8_t, kDataCodewords>& data) {
  // Remainder of data(x) * x^10 by the generator, via long division.
  const auto& g = rs_generator();
  std::array<std::uint8_t, kTotalCodewords> rem{};
  std::copy(data.begin(), data.end(), rem.begin());
  for (int i = 0; i < kDataCodewords; ++i) {
    const std::uint8_t factor = rem[i];
    if (factor == 0) continue;
    // g is monic; cancel the leading term, fold the rest in.
    for (int j = 0; j <= kEccCodewords; ++j)
      rem[i + j] = std::uint8_t(rem[i + j] ^ gf().mul(factor, g[kEccCodewords - j]));
  }
  std::array<std::uint8_t, kEccCodewords> ecc{};
  std::copy(rem.begin() + kDataCodewords, rem.end(), ecc.begin());
  return ecc;
}

RsDecodeResult rs_decode(const std::array<std::uint8_t, kTotalCodewords>& codeword) {
  constexpr int n = kTotalCodewords;
  constexpr int two_t = 2 * kEccCapacity;

  std::array<std::uint8_t, two_t> syndromes{};
  bool clean = true;
  for (int j = 0; j < two_t; ++j) {
    syndromes[j] = poly_eval(codeword.data(), n, gf().pow_alpha(j));
    clean = clean && syndromes[j] == 0;
  }
  RsDecodeResult result;
  if (clean) {
    std::copy_n(codeword.begin(), kDataCodewords, result.data.begin());
    result.corrections = 0;
    return result;
  }

  // Berlekamp-Massey: error locator lambda(x), ascending coefficients.
  std::vector<std::uint8_t> lambda = {1}, prev = {1};
  int errors = 0, m = 1;
  std::uint8_t prev_disc = 1;
  for (int step = 0; step < two_t; ++step) {
    std::uint8_t disc = syndromes[step];
    for (int i = 1; i <= errors && i < int(lambda.size()); ++i)
      disc = std::uint8_t(disc ^ gf().mul(lambda[i], syndromes[step - i]));
    if (disc == 0) {
      ++m;
    } else if (2 * errors <= step) {
      const std::vector<std::uint8_t> backup = lambda;
      const std::uint8_t scale = gf().div(disc, prev_disc);
      if (int(lambda.size()) < int(prev.size()) + m) lambda.resize(prev.size() + m, 0);
      for (std::size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] = std::uint8_t(lambda[i + m] ^ gf().mul(scale, prev[i]));
      errors = step + 1 - errors;
      prev = backup;
      prev_disc = disc;
      m = 1;
    } else {
      const std::uint8_t scale = gf().div(disc, prev_disc);
      if (int(lambda.size()) < int(prev.size()) + m) lambda.resize(prev.size() + m, 0);
      for (std::size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] = std::uint8_t(lambda[i + m] ^ gf().mul(scale, prev[i]));
      ++m;
    }
  }
  if (errors > kEccCapacity) throw Uncorrectable("error locator degree exceeds capacity");

  // Chien search over the n valid positions; x-power p maps to byte 25-p.
  std::vector<int> error_powers;
  for (int p = 0; p < n; ++p) {
    const std::uint8_t x_inv = gf().pow_alpha(-p);
    std::uint8_t acc = 0;
    std::uint8_t xp = 1;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      acc = std::uint8_t(acc ^ gf().mul(lambda[i], xp));
      xp = gf().mul(xp, x_inv);
    }
    if (acc == 0) error_powers.push_back(p);
  }
  if (int(error_powers.size()) != errors)
    throw Uncorrectable("error locator roots inconsistent with degree");

  // Omega(x) = S(x) * lambda(x) mod x^(2t), S ascending.
  std::array<std::uint8_t, two_t> omega{};
  for (int i = 0; i < two_t; ++i) {
    std::uint8_t acc = 0;
    for (int j = 0; j <= i && j < int(lambda.size()); ++j)
      acc = std::uint8_t(acc ^ gf().mul(lambda[j], syndromes[i - j]));
    omega[i] = acc;
  }

  std::array<std::uint8_t, kTotalCodewords> fixed = codeword;
  for (int p : error_powers) {
    const std::uint8_t x_inv = gf().pow_alpha(-p);
    // omega(X^-1)
    std::uint8_t om = 0, xp = 1;
    for (int i = 0; i < two_t; ++i) {
      om = std::uint8_t(om ^ gf().mul(omega[i], xp));
      xp = gf().mul(xp, x_inv);
    }
    // lambda'(X^-1): odd-degree terms only
    std::uint8_t dl = 0;
    xp = 1;  // (X^-1)^0 for the degree-1 coefficient
    for (std::size_t i = 1; i < lambda.size(); i += 2) {
      dl = std::uint8_t(dl ^ gf().mul(lambda[i], xp));
      xp = gf().mul(xp, gf().mul(x_inv, x_inv));
    }
    if (dl == 0) throw Uncorrectable("Forney denominator vanished");
    // first consecutive root alpha^0: magnitude = X * omega(X^-1) / lambda'(X^-1)
    const std::uint8_t magnitude = gf().mul(gf().pow_alpha(p), gf().div(om, dl));
    if (magnitude == 0) throw Uncorrectable("zero error magnitude");
    fixed[n - 1 - p] = std::uint8_t(fixed[n - 1 - p] ^ magnitude);
  }

  for (int j = 0; j < two_t; ++j)
    if (poly_eval(fixed.data(), n, gf().pow_alpha(j)) != 0)
      throw Uncorrectable("syndromes nonzero after correction");

  std::copy_n(fixed.begin(), kDataCodewords, result.data.begin());
  result.corrections = errors;
  return result;
}

namespace {

// ---- symbol construction ----

bool is_function_module(int r, int c) {
  if (r == 6 || c == 6) return true;                 // timing
  if (r <= 8 && c <= 8) return true;                 // finder + separator + format, top-left
  if (r <= 8 && c >= kModules - 8) return true;      // top-right
  if (r >= kModules - 8 && c <= 8) return true;      // bottom-left (incl. dark module)
  return false;
}

bool mask_bit(int mask, int r, int c) {
  switch (mask) {
    case 0: return (r + c) % 2 == 0;
    case 1: return r % 2 == 0;
    case 2: return c % 3 == 0;
    case 3: return (r + c) % 3 == 0;
    case 4: return (r / 2 + c / 3) % 2 == 0;
    case 5: return (r * c) % 2 + (r * c) % 3 == 0;
    case 6: return ((r * c) % 2 + (r * c) % 3) % 2 == 0;
    default: return ((r + c) % 2 + (r * c) % 3) % 2 == 0;
  }
}

void draw_finder(ModuleGrid& g, int r0, int c0) {
  for (int dr = 0; dr < 7; ++dr)
    for (int dc = 0; dc < 7; ++dc) {
      const bool dark =
          dr == 0 || dr == 6 || dc == 0 || dc == 6 || (dr >= 2 && dr <= 4 && dc >= 2 && dc <= 4);
      g.set(r0 + dr, c0 + dc, dark);
    }
}

void draw_function_patterns(ModuleGrid& g) {
  for (int i = 0; i < kModules; ++i) {
    g.set(6, i, i % 2 == 0);
    g.set(i, 6, i % 2 == 0);
  }
  draw_finder(g, 0, 0);
  draw_finder(g, 0, kModules - 7);
  draw_finder(g, kModules - 7, 0);
  // separators (light)
  for (int i = 0; i < 8; ++i) {
    g.set(7, i, false);
    g.set(i, 7, false);
    g.set(7, kModules - 1 - i, false);
    g.set(i, kModules - 8, false);
    g.set(kModules - 8, i, false);
    g.set(kModules - 1 - i, 7, false);
  }
  g.set(kModules - 8, 8, true);  // fixed dark module
}

std::uint16_t format_bits(int mask) {
  const int ecc_bits = 0;  // level M
  const int data5 = (ecc_bits << 3) | mask;
  int rem = data5;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return std::uint16_t(((data5 << 10) | rem) ^ 0x5412);
}

void draw_format_info(ModuleGrid& g, int mask) {
  const std::uint16_t bits = format_bits(mask);
  auto bit = [&](int i) { return ((bits >> i) & 1) != 0; };
  // first copy, around the top-left finder
  for (int i = 0; i <= 5; ++i) g.set(i, 8, bit(i));
  g.set(7, 8, bit(6));
  g.set(8, 8, bit(7));
  g.set(8, 7, bit(8));
  for (int i = 9; i <= 14; ++i) g.set(8, 14 - i, bit(i));
  // second copy, split under the top-right and beside the bottom-left finder
  for (int i = 0; i <= 7; ++i) g.set(8, kModules - 1 - i, bit(i));
  for (int i = 8; i <= 14; ++i) g.set(kModules - 15 + i, 8, bit(i));
}

// Zigzag placement order of the 208 data-module positions.
const std::vector<std::pair<int, int>>& placement_order() {
  static const auto order = [] {
    std::vector<std::pair<int, int>> out;
    out.reserve(8 * kTotalCodewords);
    for (int right = kModules - 1; right >= 1; right -= 2) {
      if (right == 6) right = 5;
      for (int vert = 0; vert < kModules; ++vert) {
        for (int j = 0; j < 2; ++j) {
          const int c = right - j;
          const bool upward = ((right + 1) & 2) == 0;
          const int r = upward ? kModules - 1 - vert : vert;
          if (!is_function_module(r, c)) out.emplace_back(r, c);
        }
      }
    }
    return out;
  }();
  return order;
}

std::array<std::uint8_t, kDataCodewords> build_data_codewords(const Payload& p) {
  std::vector<bool> bits;
  bits.reserve(8 * kDataCodewords);
  auto append = [&](std::uint32_t value, int n) {
    for (int i = n - 1; i >= 0; --i) bits.push_back(((value >> i) & 1) != 0);
  };
  append(0x4, 4);  // byte mode
  append(std::uint32_t(p.text.size()), 8);
  for (unsigned char ch : p.text) append(ch, 8);
  const int capacity = 8 * kDataCodewords;
  const int terminator = std::min(4, capacity - int(bits.size()));
  for (int i = 0; i < terminator; ++i) bits.push_back(false);
  while (bits.size() % 8 != 0) bits.push_back(false);

  std::array<std::uint8_t, kDataCodewords> data{};
  std::size_t nbytes = bits.size() / 8;
  for (std::size_t i = 0; i < nbytes; ++i) {
    std::uint8_t b = 0;
    for (int j = 0; j < 8; ++j) b = std::uint8_t((b << 1) | (bits[8 * i + j] ? 1 : 0));
    data[i] = b;
  }
  const std::uint8_t pads[2] = {0xEC, 0x11};
  for (std::size_t i = nbytes; i < kDataCodewords; ++i) data[i] = pads[(i - nbytes) % 2];
  return data;
}

ModuleGrid build_symbol(const std::array<std::uint8_t, kTotalCodewords>& codewords, int mask) {
  ModuleGrid g;
  draw_function_patterns(g);
  draw_format_info(g, mask);
  const auto& order = placement_order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [r, c] = order[i];
    const bool bit = ((codewords[i >> 3] >> (7 - (i & 7))) & 1) != 0;
    g.set(r, c, bit ^ mask_bit(mask, r, c));
  }
  return g;
}

}  // namespace

int penalty_score(const ModuleGrid& g) {
  int score = 0;
  // N1: runs of >= 5 equal modules in rows and columns
  for (int axis = 0; axis < 2; ++axis) {
    for (int i = 0; i < kModules; ++i) {
      int run = 1;
      bool color = axis == 0 ? g.get(i, 0) : g.get(0, i);
      for (int j = 1; j < kModules; ++j) {
        const bool cur = axis == 0 ? g.get(i, j) : g.get(j, i);
        if (cur == color) {
          ++run;
        } else {
          if (run >= 5) score += 3 + (run - 5);
          color = cur;
          run = 1;
        }
      }
      if (run >= 5) score += 3 + (run - 5);
    }
  }
  // N2: uniform 2x2 blocks
  for (int r = 0; r + 1 < kModules; ++r)
    for (int c = 0; c + 1 < kModules; ++c) {
      const int sum = int(g.get(r, c)) + int(g.get(r, c + 1)) + int(g.get(r + 1, c)) +
                      int(g.get(r + 1, c + 1));
      if (sum == 0 || sum == 4) score += 3;
    }
  // N3: finder-like 1:1:3:1:1 pattern with a 4-module light flank
  for (int axis = 0; axis < 2; ++axis) {
    for (int i = 0; i < kModules; ++i) {
      unsigned window = 0;
      for (int j = 0; j < kModules; ++j) {
        const bool cur = axis == 0 ? g.get(i, j) : g.get(j, i);
        window = ((window << 1) & 0x7FF) | unsigned(cur);
        if (j >= 10 && (window == 0x5D0 || window == 0x05D)) score += 40;
      }
    }
  }
  // N4: dark-module proportion, 10 points per 5% step away from 50%
  int dark = 0;
  for (int r = 0; r < kModules; ++r)
    for (int c = 0; c < kModules; ++c) dark += int(g.get(r, c));
  score += 10 * (std::abs(20 * dark - 10 * kModules * kModules) / (kModules * kModules));
  return score;
}

QuietGrid encode(const Payload& payload) {
  Payload::make(payload.text);  // revalidate
  const auto data = build_data_codewords(payload);
  const auto ecc = rs_encode(data);
  std::array<std::uint8_t, kTotalCodewords> codewords{};
  std::copy(data.begin(), data.end(), codewords.begin());
  std::copy(ecc.begin(), ecc.end(), codewords.begin() + kDataCodewords);

  int best_mask = 0;
  int best_score = 0;
  ModuleGrid best;
  for (int mask = 0; mask < 8; ++mask) {
    const ModuleGrid candidate = build_symbol(codewords, mask);
    const int score = penalty_score(candidate);
    if (mask == 0 || score < best_score) {
      best_mask = mask;
      best_score = score;
      best = candidate;
    }
  }
  (void)best_mask;
  return QuietGrid::from_interior(best);
}

namespace {

int structure_mismatches(const ModuleGrid& g) {
  ModuleGrid reference;
  draw_function_patterns(reference);
  int mismatches = 0;
  for (int r = 0; r < kModules; ++r)
    for (int c = 0; c < kModules; ++c) {
      if (!is_function_module(r, c)) continue;
      // format-information strips are mask-dependent, not structural
      const bool format_strip = (r == 8 && (c <= 8 || c >= kModules - 8)) ||
                                (c == 8 && (r <= 8 || r >= kModules - 8));
      if (format_strip && !(r == kModules - 8 && c == 8)) continue;
      if (g.get(r, c) != reference.get(r, c)) ++mismatches;
    }
  return mismatches;
}

constexpr int kStructureTolerance = 12;

struct FormatInfo {
  int mask = 0;
  int ecc_bits = 0;
  int distance = 0;
};

// Nearest valid format codeword by Hamming distance; BCH(15,5) corrects
// up to 3 bit errors.
FormatInfo decode_format_bits(std::uint16_t raw) {
  FormatInfo best;
  int best_distance = 16;
  for (int data5 = 0; data5 < 32; ++data5) {
    const int ecc_bits = data5 >> 3;
    const int mask = data5 & 7;
    int rem = data5;
    for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
    const std::uint16_t word = std::uint16_t((data5 << 10) | rem);
    const int distance = std::popcount(std::uint16_t(word ^ raw));
    if (distance < best_distance) {
      best_distance = distance;
      best = {mask, ecc_bits, distance};
    }
  }
  best.distance = best_distance;
  return best;
}

std::uint16_t read_format_copy(const ModuleGrid& g, bool first) {
  std::uint16_t bits = 0;
  auto put = [&](int i, bool v) { bits = std::uint16_t(bits | (std::uint16_t(v) << i)); };
  if (first) {
    for (int i = 0; i <= 5; ++i) put(i, g.get(i, 8));
    put(6, g.get(7, 8));
    put(7, g.get(8, 8));
    put(8, g.get(8, 7));
    for (int i = 9; i <= 14; ++i) put(i, g.get(8, 14 - i));
  } else {
    for (int i = 0; i <= 7; ++i) put(i, g.get(8, kModules - 1 - i));
    for (int i = 8; i <= 14; ++i) put(i, g.get(kModules - 15 + i, 8));
  }
  return std::uint16_t(bits ^ 0x5412);
}

}  // namespace

DecodeResult decode(const QuietGrid& grid) {
  const ModuleGrid g = grid.interior();
  if (structure_mismatches(g) > kStructureTolerance)
    throw StructureInvalid("finder/timing damage beyond tolerance");

  const FormatInfo fa = decode_format_bits(read_format_copy(g, true));
  const FormatInfo fb = decode_format_bits(read_format_copy(g, false));
  const FormatInfo& fmt = fa.distance <= fb.distance ? fa : fb;
  if (fmt.distance > 3) throw FormatInfoInvalid("both format copies beyond BCH capacity");
  if (fmt.ecc_bits != 0) throw FormatInfoInvalid("only ECC level M symbols are produced here");

  const auto& order = placement_order();
  std::array<std::uint8_t, kTotalCodewords> codewords{};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [r, c] = order[i];
    const bool bit = g.get(r, c) ^ mask_bit(fmt.mask, r, c);
    if (bit) codewords[i >> 3] = std::uint8_t(codewords[i >> 3] | (1u << (7 - (i & 7))));
  }
  const RsDecodeResult rs = rs_decode(codewords);

  const int mode = rs.data[0] >> 4;
  if (mode != 0x4) throw StructureInvalid("unexpected mode indicator");
  const int count = ((rs.data[0] & 0xF) << 4) | (rs.data[1] >> 4);
  if (count < 1 || count > kMaxPayloadBytes) throw StructureInvalid("byte count out of range");
  std::string text(count, '\0');
  for (int i = 0; i < count; ++i)
    text[i] = char(((rs.data[1 + i] & 0xF) << 4) | (rs.data[2 + i] >> 4));
  for (unsigned char ch : text)
    if (ch < 0x20 || ch > 0x7E) throw StructureInvalid("decoded byte outside printable ASCII");
  return DecodeResult{Payload{std::move(text)}, rs.corrections};
}

QuietGrid sample_grid(const Image& image) {
  if (image.rows < kQuietSize || image.cols < kQuietSize)
    throw std::invalid_argument("sample_grid: image smaller than the 29x29 module raster");
  std::array<double, kQuietSize * kQuietSize> sums{};
  std::array<int, kQuietSize * kQuietSize> counts{};
  for (int r = 0; r < image.rows; ++r) {
    const int gr = (2 * r + 1) * kQuietSize / (2 * image.rows);
    for (int c = 0; c < image.cols; ++c) {
      const int gc = (2 * c + 1) * kQuietSize / (2 * image.cols);
      sums[gr * kQuietSize + gc] += image.at(r, c);
      counts[gr * kQuietSize + gc] += 1;
    }
  }
  std::array<double, kQuietSize * kQuietSize> means{};
  for (int i = 0; i < kQuietSize * kQuietSize; ++i) means[i] = sums[i] / counts[i];

  // Otsu threshold over the 841 cell means.
  std::array<double, kQuietSize * kQuietSize> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  const int n = int(sorted.size());
  if (sorted.front() == sorted.back())
    throw DegenerateImage("all cell means equal; threshold undefined");
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];
  double best_var = -1.0;
  double threshold = 0.0;
  for (int i = 1; i < n; ++i) {
    if (sorted[i] == sorted[i - 1]) continue;
    const double w0 = i, w1 = n - i;
    const double mu0 = prefix[i] / w0;
    const double mu1 = (prefix[n] - prefix[i]) / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      threshold = 0.5 * (sorted[i - 1] + sorted[i]);
    }
  }
  QuietGrid q;
  for (int r = 0; r < kQuietSize; ++r)
    for (int c = 0; c < kQuietSize; ++c) q.set(r, c, means[r * kQuietSize + c] < threshold);
  return q;
}

Image grid_to_image(const QuietGrid& g, int rows, int cols) {
  Image img(rows, cols);
  const double sy = double(kQuietSize) / rows;
  const double sx = double(kQuietSize) / cols;
  for (int r = 0; r < rows; ++r) {
    const double y0 = r * sy, y1 = (r + 1) * sy;
    const int m0 = std::max(0, int(std::floor(y0)));
    const int m1 = std::min(kQuietSize, int(std::ceil(y1)));
    for (int c = 0; c < cols; ++c) {
      const double x0 = c * sx, x1 = (c + 1) * sx;
      const int n0 = std::max(0, int(std::floor(x0)));
      const int n1 = std::min(kQuietSize, int(std::ceil(x1)));
      double acc = 0.0;
      for (int m = m0; m < m1; ++m) {
        const double wy = std::min(y1, double(m + 1)) - std::max(y0, double(m));
        if (wy <= 0.0) continue;
        for (int nn = n0; nn < n1; ++nn) {
          const double wx = std::min(x1, double(nn + 1)) - std::max(x0, double(nn));
          if (wx <= 0.0) continue;
          if (!g.get(m, nn)) acc += wy * wx;  // light = 1.0
        }
      }
      img.at(r, c) = acc / (sy * sx);
    }
  }
  return img;
}

Image grid_to_unit_image(const QuietGrid& g) {
  Image img(kQuietSize, kQuietSize);
  for (int r = 0; r < kQuietSize; ++r)
    for (int c = 0; c < kQuietSize; ++c) img.at(r, c) = g.get(r, c) ? 0.0 : 1.0;
  return img;
}

QuietGrid unit_image_to_grid(const Image& img) {
  if (img.rows != kQuietSize || img.cols != kQuietSize)
    throw StructureInvalid("expected a 29x29 single-pixel-per-module raster");
  QuietGrid g;
  for (int r = 0; r < kQuietSize; ++r)
    for (int c = 0; c < kQuietSize; ++c) g.set(r, c, img.at(r, c) < 0.5);
  return g;
}

}  // namespace ofqr::qr
