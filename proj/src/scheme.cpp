// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/scheme.hpp"

namespace svdpd {

const char* to_string(SchemeFamily f) {
    switch (f) {
    case SchemeFamily::euler_a: return "euler_a";
    case SchemeFamily::euler_b: return "euler_b";
    case SchemeFamily::sv_ab: return "sv_ab";
    case SchemeFamily::sv_ba: return "sv_ba";
    }
    return "?";
}

const char* to_string(SvAbVariant v) {
    switch (v) {
    case SvAbVariant::ab1: return "ab1";
    case SvAbVariant::ab2_gcc: return "ab2_gcc";
    case SvAbVariant::ab3_gw: return "ab3_gw";
    case SvAbVariant::ab4: return "ab4";
    case SvAbVariant::ab5: return "ab5";
    case SvAbVariant::ab6: return "ab6";
    }
    return "?";
}

const char* to_string(NoiseMode m) {
    return m == NoiseMode::independent_halves ? "independent_halves" : "approximate_half";
}

SchemeFamily family_from_string(const std::string& s) {
    if (s == "euler_a") return SchemeFamily::euler_a;
    if (s == "euler_b") return SchemeFamily::euler_b;
    if (s == "sv_ab") return SchemeFamily::sv_ab;
    if (s == "sv_ba") return SchemeFamily::sv_ba;
    throw config_error("unknown scheme family: " + s);
}

SvAbVariant variant_from_string(const std::string& s) {
    if (s == "ab1") return SvAbVariant::ab1;
    if (s == "ab2_gcc" || s == "gcc") return SvAbVariant::ab2_gcc;
    if (s == "ab3_gw" || s == "gw") return SvAbVariant::ab3_gw;
    if (s == "ab4") return SvAbVariant::ab4;
    if (s == "ab5") return SvAbVariant::ab5;
    if (s == "ab6") return SvAbVariant::ab6;
    throw config_error("unknown scheme variant: " + s);
}

NoiseMode noise_mode_from_string(const std::string& s) {
    if (s == "independent_halves") return NoiseMode::independent_halves;
    if (s == "approximate_half") return NoiseMode::approximate_half;
    throw config_error("unknown noise mode: " + s);
}

std::string scheme_label(const SchemeSpec& s) {
    std::string label = to_string(s.family);
    if (s.family == SchemeFamily::sv_ab) {
        label += "/";
        label += to_string(s.variant);
    }
    return label;
}

} // namespace svdpd
