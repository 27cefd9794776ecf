// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/tensor_io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dpu/error.hpp"

namespace dpu {

namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'T', '8', '\0'};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Integers separated by commas/whitespace; '#' starts a comment. Reports
// the line of the offending token.
std::vector<std::pair<long long, int>> tokenize_ints(const std::string& text) {
    std::vector<std::pair<long long, int>> out;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        if (ch == '\n') {
            ++line;
            ++i;
        } else if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && text[j] != ',' && text[j] != ' ' && text[j] != '\t' &&
                   text[j] != '\r' && text[j] != '\n' && text[j] != '#')
                ++j;
            long long v = 0;
            const char* b = text.data() + i;
            const char* e = text.data() + j;
            if (*b == '+') ++b;
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || p != e)
                throw ParseError("not an integer: '" + text.substr(i, j - i) + "'", line);
            out.emplace_back(v, line);
            i = j;
        }
    }
    return out;
}

void put_i32(std::string& s, std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}

std::int32_t get_i32(const std::string& s, std::size_t off) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b)
        u |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + b])) << (8 * b);
    return static_cast<std::int32_t>(u);
}

}  // namespace

QTensor parse_tensor_text(const std::string& text) {
    const auto toks = tokenize_ints(text);
    if (toks.size() < 5) throw ParseError("tensor header needs n,h,w,c,scale_exp", 0);
    TensorDims d;
    int* fields[] = {&d.n, &d.h, &d.w, &d.c};
    for (int i = 0; i < 4; ++i) {
        if (toks[i].first < 1 || toks[i].first > (1 << 24))
            throw ParseError("bad tensor dimension " + std::to_string(toks[i].first), toks[i].second);
        *fields[i] = static_cast<int>(toks[i].first);
    }
    const int scale_exp = static_cast<int>(toks[4].first);
    std::vector<std::int8_t> data;
    data.reserve(toks.size() - 5);
    for (std::size_t i = 5; i < toks.size(); ++i) {
        const auto [v, line] = toks[i];
        if (v < -128 || v > 127) throw ParseError("value " + std::to_string(v) + " outside int8", line);
        data.push_back(static_cast<std::int8_t>(v));
    }
    if (data.size() != d.count())
        throw ParseError("tensor payload has " + std::to_string(data.size()) +
                             " values, header needs " + std::to_string(d.count()),
                         0);
    return QTensor(d, std::move(data), scale_exp);
}

QTensor parse_tensor_binary(const std::string& bytes) {
    constexpr std::size_t header = 4 + 5 * 4;
    if (bytes.size() < header || std::memcmp(bytes.data(), kMagic.data(), 4) != 0)
        throw ParseError("not a binary tensor file", 0);
    TensorDims d{get_i32(bytes, 4), get_i32(bytes, 8), get_i32(bytes, 12), get_i32(bytes, 16)};
    const int scale_exp = get_i32(bytes, 20);
    if (d.n < 1 || d.h < 1 || d.w < 1 || d.c < 1) throw ParseError("bad tensor dimensions", 0);
    if (bytes.size() - header != d.count())
        throw ParseError("binary tensor payload size mismatch", 0);
    std::vector<std::int8_t> data(d.count());
    std::memcpy(data.data(), bytes.data() + header, data.size());
    return QTensor(d, std::move(data), scale_exp);
}

QTensor read_tensor(const std::filesystem::path& path) {
    const std::string bytes = slurp(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic.data(), 4) == 0)
        return parse_tensor_binary(bytes);
    return parse_tensor_text(bytes);
}

std::string format_tensor_text(const QTensor& t) {
    const auto& d = t.dims();
    std::ostringstream out;
    out << d.n << ',' << d.h << ',' << d.w << ',' << d.c << ',' << t.scale_exp() << '\n';
    const auto data = t.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << static_cast<int>(data[i]);
        out << ((i + 1) % static_cast<std::size_t>(d.c) == 0 ? '\n' : ',');
    }
    return out.str();
}

std::string format_tensor_binary(const QTensor& t) {
    std::string s(kMagic.begin(), kMagic.end());
    const auto& d = t.dims();
    for (int v : {d.n, d.h, d.w, d.c, t.scale_exp()}) put_i32(s, v);
    const auto data = t.data();
    s.append(reinterpret_cast<const char*>(data.data()), data.size());
    return s;
}

void write_tensor(const std::filesystem::path& path, const QTensor& t, TensorFormat fmt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << (fmt == TensorFormat::binary ? format_tensor_binary(t) : format_tensor_text(t));
}

std::vector<std::int32_t> parse_int32_list(const std::string& text) {
    std::vector<std::int32_t> out;
    for (const auto& [v, line] : tokenize_ints(text)) {
        if (v < INT32_MIN || v > INT32_MAX)
            throw ParseError("value " + std::to_string(v) + " outside int32", line);
        out.push_back(static_cast<std::int32_t>(v));
    }
    return out;
}

std::vector<std::int32_t> read_int32_list(const std::filesystem::path& path) {
    return parse_int32_list(slurp(path));
}

}  // namespace dpu
