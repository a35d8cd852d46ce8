// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/**
 * @file
 * WGRD1 binary grid container.
 *
 * Layout, all integers and floats little-endian:
 *
 *     "WGRD1"                 5 bytes magic
 *     u8   endianness flag    0 = little-endian payload
 *     u32  rank
 *     u64  dims[rank]
 *     f64  axis_k[dims[k]]    for k = 0 .. rank-1
 *     u64  metadata length, then UTF-8 JSON object of string values
 *     f64  payload[prod(dims)] row-major
 */

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace phaselock {

inline constexpr std::string_view kGridMagic = "WGRD1";

struct GridFile {
    std::vector<std::uint64_t> dims;
    std::vector<std::vector<double>> axes;
    std::vector<double> payload;
    std::map<std::string, std::string> metadata;

    bool operator==(const GridFile &) const = default;
};

namespace detail {

template <class T> void put_le(std::string &out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.append(reinterpret_cast<const char *>(bytes.data()), bytes.size());
}

class ByteReader {
  public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    template <class T> T get(const char *what) {
        need(sizeof(T), what);
        std::array<unsigned char, sizeof(T)> bytes{};
        std::memcpy(bytes.data(), data_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            std::reverse(bytes.begin(), bytes.end());
        }
        pos_ += sizeof(T);
        return std::bit_cast<T>(bytes);
    }

    std::string_view bytes(std::size_t n, const char *what) {
        need(n, what);
        auto view = data_.substr(pos_, n);
        pos_ += n;
        return view;
    }

    [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

  private:
    void need(std::size_t n, const char *what) const {
        if (data_.size() - pos_ < n) {
            throw Error(ErrorKind::Format, std::string("grid file truncated while reading ") + what);
        }
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

inline std::uint64_t element_count(const std::vector<std::uint64_t> &dims) {
    std::uint64_t n = 1;
    for (auto d : dims) {
        n *= d;
    }
    return n;
}

} // namespace detail

inline void validate(const GridFile &g) {
    require(!g.dims.empty(), ErrorKind::Shape, "grid rank must be at least 1");
    require(g.axes.size() == g.dims.size(), ErrorKind::Shape, "one axis array per dimension required");
    for (std::size_t k = 0; k < g.dims.size(); ++k) {
        require(g.axes[k].size() == g.dims[k], ErrorKind::Shape,
                "axis " + std::to_string(k) + " length does not match its dimension");
    }
    require(g.payload.size() == detail::element_count(g.dims), ErrorKind::Shape,
            "payload size does not match the product of dimensions");
}

inline std::string metadata_json(const std::map<std::string, std::string> &metadata) {
    const nlohmann::json j = metadata;
    return j.dump();
}

/// Byte size of an encoded grid, from its shape and metadata block alone.
inline std::uint64_t encoded_size(const std::vector<std::uint64_t> &dims, std::uint64_t metadata_bytes) {
    std::uint64_t axis_total = 0;
    for (auto d : dims) {
        axis_total += d;
    }
    return kGridMagic.size() + 1 + 4 + 8 * dims.size() + 8 * axis_total + 8 + metadata_bytes +
           8 * detail::element_count(dims);
}

inline std::string encode_grid(const GridFile &g) {
    validate(g);
    const std::string meta = metadata_json(g.metadata);
    std::string out;
    out.reserve(encoded_size(g.dims, meta.size()));
    out.append(kGridMagic);
    out.push_back('\0');
    detail::put_le(out, static_cast<std::uint32_t>(g.dims.size()));
    for (auto d : g.dims) {
        detail::put_le(out, d);
    }
    for (const auto &axis : g.axes) {
        for (double v : axis) {
            detail::put_le(out, v);
        }
    }
    detail::put_le(out, static_cast<std::uint64_t>(meta.size()));
    out.append(meta);
    for (double v : g.payload) {
        detail::put_le(out, v);
    }
    return out;
}

inline GridFile decode_grid(std::string_view data) {
    detail::ByteReader r(data);
    if (r.remaining() < kGridMagic.size() || r.bytes(kGridMagic.size(), "magic") != kGridMagic) {
        throw Error(ErrorKind::Format, "not a WGRD1 grid file (magic mismatch)");
    }
    if (r.get<std::uint8_t>("endianness flag") != 0) {
        throw Error(ErrorKind::Format, "unsupported endianness flag");
    }
    GridFile g;
    const auto rank = r.get<std::uint32_t>("rank");
    require(rank >= 1 && rank <= 16, ErrorKind::Format, "implausible grid rank " + std::to_string(rank));
    std::uint64_t axis_total = 0;
    for (std::uint32_t k = 0; k < rank; ++k) {
        const auto d = r.get<std::uint64_t>("dimensions");
        require(d <= r.remaining() / 8, ErrorKind::Format, "grid file truncated (dimension too large)");
        g.dims.push_back(d);
        axis_total += d;
    }
    require(axis_total <= r.remaining() / 8, ErrorKind::Format, "grid file truncated in axes");
    for (auto d : g.dims) {
        std::vector<double> axis(d);
        for (auto &v : axis) {
            v = r.get<double>("axes");
        }
        g.axes.push_back(std::move(axis));
    }
    const auto meta_len = r.get<std::uint64_t>("metadata length");
    require(meta_len <= r.remaining(), ErrorKind::Format, "grid file truncated in metadata");
    const auto meta = r.bytes(meta_len, "metadata");
    try {
        g.metadata = nlohmann::json::parse(meta).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("malformed grid metadata: ") + e.what());
    }
    const std::uint64_t count = detail::element_count(g.dims);
    require(r.remaining() == count * 8, ErrorKind::Format,
            r.remaining() < count * 8 ? "grid file truncated in payload"
                                      : "trailing bytes after grid payload");
    g.payload.resize(count);
    for (auto &v : g.payload) {
        v = r.get<double>("payload");
    }
    return g;
}

inline void write_grid(const std::filesystem::path &path, const GridFile &g) {
    const std::string bytes = encode_grid(g);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(os), ErrorKind::Format, "cannot open " + path.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(os), ErrorKind::Format, "write failed for " + path.string());
}

inline GridFile read_grid(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::Format, "cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_grid(bytes);
}

} // namespace phaselock
