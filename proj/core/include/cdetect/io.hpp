#pragma once

#include <string>
#include <vector>

#include "cdetect/basis.hpp"
#include "cdetect/crucial.hpp"
#include "cdetect/detect.hpp"
#include "cdetect/net.hpp"
#include "cdetect/reachability.hpp"

namespace cdetect {

// Net documents are line-oriented:
//
//   # comment
//   places: p1 p2 p3
//   initial: p1=1
//   transition: t1
//   label: a
//   pre: p1
//   post: p2*2
//
// A transition without a label line is unobservable. Arc entries are
// `place` or `place*count` with count >= 1. Initial entries are `place=count`
// (or a bare place name for one token); unlisted places hold zero tokens.
LabeledPetriNet parse_net(const std::string& text);
std::string serialize_net(const LabeledPetriNet& net);

// Crucial-set documents start with `crucial: explicit` or `crucial: gmec`,
// followed by `marking: <m integers>` lines or `row: <m coefficients> <= <bound>`
// lines respectively.
CrucialSet parse_crucial(const std::string& text, int num_places);
std::string serialize_crucial(const CrucialSet& crucial);

/// "[1 0 0]"
std::string format_marking_vector(const Marking& m);
/// "{p1:1}"; "{}" for the zero marking.
std::string format_marking_map(const LabeledPetriNet& net, const Marking& m);

Marking parse_marking_vector(const std::string& text, int num_places);

/// Splits a word argument into event symbols: whitespace/comma separated
/// tokens; a single token that is not itself a symbol is split into
/// characters when each character is a symbol of the alphabet.
std::vector<std::string> parse_word(const std::string& text, const std::vector<std::string>& alphabet);

std::string export_dot(const LabeledPetriNet& net, const ReachabilityGraph& rg);
std::string export_dot(const LabeledPetriNet& net, const BasisGraph& brg);
/// Observer of the basis graph; members are rendered as (marking, alpha, beta).
std::string export_dot(const LabeledPetriNet& net, const BasisGraph& brg, const ObserverDfa& obs);
/// Observer of the reachability graph; members are rendered as markings.
std::string export_dot(const LabeledPetriNet& net, const ReachabilityGraph& rg, const ObserverDfa& obs);

/// Machine-readable verification report (JSON). Deterministic except for the
/// isolated "timing_ms" object.
std::string verdict_report(const LabeledPetriNet& net, const CrucialSet& crucial,
                           const VerifyOutcome& outcome);

}  // namespace cdetect
