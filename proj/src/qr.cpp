#include "graphictown/qr.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace gtown {

namespace {

// Level M tables indexed by version (index 0 unused).
constexpr std::array<int, 41> kEccPerBlock = {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24,
                                              24, 28, 28, 26, 26, 26, 26, 28, 28, 28, 28, 28, 28, 28, 28,
                                              28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28};
constexpr std::array<int, 41> kNumBlocks = {-1, 1,  1,  1,  2,  2,  4,  4,  4,  5,  5,  5,  8,  9,
                                            9,  10, 10, 11, 13, 14, 16, 17, 17, 18, 20, 21, 23, 25,
                                            26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49};

int raw_data_modules(int ver) {
  int result = (16 * ver + 128) * ver + 64;
  if (ver >= 2) {
    const int num_align = ver / 7 + 2;
    result -= (25 * num_align - 10) * num_align - 55;
    if (ver >= 7) result -= 36;
  }
  return result;
}

int data_codewords(int ver) { return raw_data_modules(ver) / 8 - kEccPerBlock[ver] * kNumBlocks[ver]; }

std::uint8_t gf_mul(std::uint8_t x, std::uint8_t y) {
  int z = 0;
  for (int i = 7; i >= 0; --i) {
    z = (z << 1) ^ ((z >> 7) * 0x11D);
    z ^= ((y >> i) & 1) * x;
  }
  return static_cast<std::uint8_t>(z);
}

std::vector<std::uint8_t> rs_divisor(int degree) {
  std::vector<std::uint8_t> result(degree, 0);
  result.back() = 1;
  std::uint8_t root = 1;
  for (int i = 0; i < degree; ++i) {
    for (int j = 0; j < degree; ++j) {
      result[j] = gf_mul(result[j], root);
      if (j + 1 < degree) result[j] ^= result[j + 1];
    }
    root = gf_mul(root, 0x02);
  }
  return result;
}

std::vector<std::uint8_t> rs_remainder(const std::vector<std::uint8_t>& data, const std::vector<std::uint8_t>& divisor) {
  std::vector<std::uint8_t> result(divisor.size(), 0);
  for (std::uint8_t b : data) {
    const std::uint8_t factor = b ^ result.front();
    result.erase(result.begin());
    result.push_back(0);
    for (std::size_t i = 0; i < result.size(); ++i) result[i] ^= gf_mul(divisor[i], factor);
  }
  return result;
}

std::vector<int> alignment_positions(int ver) {
  if (ver == 1) return {};
  const int num_align = ver / 7 + 2;
  const int step = ver == 32 ? 26 : (ver * 4 + num_align * 2 + 1) / (num_align * 2 - 2) * 2;
  std::vector<int> result(num_align);
  result[0] = 6;
  for (int i = num_align - 1, pos = ver * 4 + 17 - 7; i >= 1; --i, pos -= step) result[i] = pos;
  return result;
}

bool mask_bit(int mask, int x, int y) {
  switch (mask) {
    case 0: return (x + y) % 2 == 0;
    case 1: return y % 2 == 0;
    case 2: return x % 3 == 0;
    case 3: return (x + y) % 3 == 0;
    case 4: return (x / 3 + y / 2) % 2 == 0;
    case 5: return x * y % 2 + x * y % 3 == 0;
    case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
    default: return ((x + y) % 2 + x * y % 3) % 2 == 0;
  }
}

}  // namespace

int qr_byte_capacity(int version) {
  const int count_bits = version <= 9 ? 8 : 16;
  return (data_codewords(version) * 8 - 4 - count_bits) / 8;
}

QrCode QrCode::encode(std::string_view text) {
  int ver = 1;
  while (ver <= 40 && qr_byte_capacity(ver) < static_cast<int>(text.size())) ++ver;
  if (ver > 40) throw std::length_error("text too long for a QR code");

  std::vector<bool> bits;
  auto append = [&](std::uint32_t value, int n) {
    for (int i = n - 1; i >= 0; --i) bits.push_back(((value >> i) & 1) != 0);
  };
  append(0x4, 4);
  append(static_cast<std::uint32_t>(text.size()), ver <= 9 ? 8 : 16);
  for (char c : text) append(static_cast<std::uint8_t>(c), 8);
  const std::size_t capacity_bits = static_cast<std::size_t>(data_codewords(ver)) * 8;
  append(0, static_cast<int>(std::min<std::size_t>(4, capacity_bits - bits.size())));
  append(0, static_cast<int>((8 - bits.size() % 8) % 8));
  for (std::uint8_t pad = 0xEC; bits.size() < capacity_bits; pad ^= 0xEC ^ 0x11) append(pad, 8);

  std::vector<std::uint8_t> data(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) data[i >> 3] |= static_cast<std::uint8_t>(bits[i] << (7 - (i & 7)));
  return QrCode(ver, data);
}

QrCode::QrCode(int version, const std::vector<std::uint8_t>& data)
    : version_(version), size_(version * 4 + 17) {
  modules_.assign(static_cast<std::size_t>(size_) * size_, false);
  is_function_.assign(modules_.size(), false);
  draw_function_patterns();

  // Split into blocks, append ECC and interleave.
  const int num_blocks = kNumBlocks[version_];
  const int ecc_len = kEccPerBlock[version_];
  const int raw_codewords = raw_data_modules(version_) / 8;
  const int num_short = num_blocks - raw_codewords % num_blocks;
  const int short_len = raw_codewords / num_blocks;
  const auto divisor = rs_divisor(ecc_len);
  std::vector<std::vector<std::uint8_t>> blocks;
  for (int i = 0, k = 0; i < num_blocks; ++i) {
    const int len = short_len - ecc_len + (i < num_short ? 0 : 1);
    std::vector<std::uint8_t> block(data.begin() + k, data.begin() + k + len);
    k += len;
    const auto ecc = rs_remainder(block, divisor);
    if (i < num_short) block.push_back(0);
    block.insert(block.end(), ecc.begin(), ecc.end());
    blocks.push_back(std::move(block));
  }
  std::vector<std::uint8_t> codewords;
  for (std::size_t i = 0; i < blocks[0].size(); ++i)
    for (int j = 0; j < num_blocks; ++j)
      if (i != static_cast<std::size_t>(short_len - ecc_len) || j >= num_short) codewords.push_back(blocks[j][i]);
  draw_codewords(codewords);

  long best = -1;
  for (int m = 0; m < 8; ++m) {
    apply_mask(m);
    draw_format_bits(m);
    const long p = penalty();
    if (best < 0 || p < best) {
      best = p;
      mask_ = m;
    }
    apply_mask(m);  // XOR undoes it
  }
  apply_mask(mask_);
  draw_format_bits(mask_);
}

void QrCode::set_function(int x, int y, bool dark) {
  const std::size_t i = static_cast<std::size_t>(y) * size_ + x;
  modules_[i] = dark;
  is_function_[i] = true;
}

void QrCode::draw_function_patterns() {
  for (int i = 0; i < size_; ++i) {
    set_function(6, i, i % 2 == 0);
    set_function(i, 6, i % 2 == 0);
  }
  draw_finder(3, 3);
  draw_finder(size_ - 4, 3);
  draw_finder(3, size_ - 4);
  const auto pos = alignment_positions(version_);
  const int n = static_cast<int>(pos.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!((i == 0 && j == 0) || (i == 0 && j == n - 1) || (i == n - 1 && j == 0))) draw_alignment(pos[i], pos[j]);
  draw_format_bits(0);
  draw_version();
}

void QrCode::draw_format_bits(int mask) {
  const int data = (0 << 3) | mask;  // level M has format bits 00
  int rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  const int bits = (data << 10 | rem) ^ 0x5412;
  auto bit = [&](int i) { return ((bits >> i) & 1) != 0; };
  for (int i = 0; i <= 5; ++i) set_function(8, i, bit(i));
  set_function(8, 7, bit(6));
  set_function(8, 8, bit(7));
  set_function(7, 8, bit(8));
  for (int i = 9; i < 15; ++i) set_function(14 - i, 8, bit(i));
  for (int i = 0; i < 8; ++i) set_function(size_ - 1 - i, 8, bit(i));
  for (int i = 8; i < 15; ++i) set_function(8, size_ - 15 + i, bit(i));
  set_function(8, size_ - 8, true);
}

void QrCode::draw_version() {
  if (version_ < 7) return;
  int rem = version_;
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  const long bits = static_cast<long>(version_) << 12 | rem;
  for (int i = 0; i < 18; ++i) {
    const bool dark = ((bits >> i) & 1) != 0;
    const int a = size_ - 11 + i % 3, b = i / 3;
    set_function(a, b, dark);
    set_function(b, a, dark);
  }
}

void QrCode::draw_finder(int cx, int cy) {
  for (int dy = -4; dy <= 4; ++dy)
    for (int dx = -4; dx <= 4; ++dx) {
      const int dist = std::max(std::abs(dx), std::abs(dy));
      const int x = cx + dx, y = cy + dy;
      if (x >= 0 && x < size_ && y >= 0 && y < size_) set_function(x, y, dist != 2 && dist != 4);
    }
}

void QrCode::draw_alignment(int cx, int cy) {
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) set_function(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
}

void QrCode::draw_codewords(const std::vector<std::uint8_t>& codewords) {
  std::size_t i = 0;
  for (int right = size_ - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    for (int vert = 0; vert < size_; ++vert)
      for (int j = 0; j < 2; ++j) {
        const int x = right - j;
        const bool upward = ((right + 1) & 2) == 0;
        const int y = upward ? size_ - 1 - vert : vert;
        const std::size_t idx = static_cast<std::size_t>(y) * size_ + x;
        if (!is_function_[idx] && i < codewords.size() * 8) {
          modules_[idx] = ((codewords[i >> 3] >> (7 - (i & 7))) & 1) != 0;
          ++i;
        }
      }
  }
}

void QrCode::apply_mask(int mask) {
  for (int y = 0; y < size_; ++y)
    for (int x = 0; x < size_; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * size_ + x;
      if (!is_function_[idx] && mask_bit(mask, x, y)) modules_[idx] = !modules_[idx];
    }
}

long QrCode::penalty() const {
  long result = 0;
  auto dark = [&](int x, int y) { return module(x, y); };
  // Runs of five or more same-colored modules, rows then columns.
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < size_; ++a) {
      int run = 0;
      bool color = false;
      for (int b = 0; b < size_; ++b) {
        const bool c = pass == 0 ? dark(b, a) : dark(a, b);
        if (b > 0 && c == color) {
          ++run;
        } else {
          if (run >= 5) result += 3 + (run - 5);
          color = c;
          run = 1;
        }
      }
      if (run >= 5) result += 3 + (run - 5);
    }
  for (int y = 0; y + 1 < size_; ++y)
    for (int x = 0; x + 1 < size_; ++x) {
      const bool c = dark(x, y);
      if (c == dark(x + 1, y) && c == dark(x, y + 1) && c == dark(x + 1, y + 1)) result += 3;
    }
  // Finder-like 1:1:3:1:1 with four light modules on one side.
  static constexpr std::array<bool, 11> kPatA = {true, false, true, true, true, false, true, false, false, false, false};
  static constexpr std::array<bool, 11> kPatB = {false, false, false, false, true, false, true, true, true, false, true};
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < size_; ++a)
      for (int b = 0; b + 11 <= size_; ++b) {
        bool ma = true, mb = true;
        for (int k = 0; k < 11; ++k) {
          const bool c = pass == 0 ? dark(b + k, a) : dark(a, b + k);
          ma = ma && c == kPatA[k];
          mb = mb && c == kPatB[k];
        }
        if (ma) result += 40;
        if (mb) result += 40;
      }
  long dark_count = 0;
  for (bool m : modules_) dark_count += m ? 1 : 0;
  const long total = static_cast<long>(size_) * size_;
  const long k = (std::labs(dark_count * 20 - total * 10) + total - 1) / total - 1;
  result += std::max(0L, k) * 10;
  return result;
}

Raster QrCode::render(int module_px) const {
  const int quiet = 4;
  const int side = (size_ + 2 * quiet) * module_px;
  Raster out(side, side, Rgba{255, 255, 255, 255});
  for (int y = 0; y < size_; ++y)
    for (int x = 0; x < size_; ++x) {
      if (!module(x, y)) continue;
      for (int py = 0; py < module_px; ++py)
        for (int px = 0; px < module_px; ++px)
          out.set((x + quiet) * module_px + px, (y + quiet) * module_px + py, Rgba{0, 0, 0, 255});
    }
  return out;
}

}  // namespace gtown
