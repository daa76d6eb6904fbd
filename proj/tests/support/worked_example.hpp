#pragma once

#include <string>

#include "cxg/predicate.hpp"

namespace cxg::testdata {

inline const std::string kSentence = "The more you think about it, the less it makes sense.";

inline const char* const kFormText = R"({string(the-1, "The"), string(more-1, "more"), string(you-1, "you"),
 string(think-1, "think"), string(about-1, "about"), string(it-1, "it"),
 string(-1, ","), string(the-2, "the"), string(less-1, "less"),
 string(it-2, "it"), string(makes-1, "makes"), string(sense-1, "sense"),
 string(-1, "."), adjacent(the-1, more-1), adjacent(more-1, you-1),
 adjacent(you-1, think-1), adjacent(think-1, about-1), adjacent(about-1, it-1),
 adjacent(it-1, -1), adjacent(-1, the-2), adjacent(the-2, less-1),
 adjacent(less-1, it-2), adjacent(it-2, makes-1), adjacent(makes-1, sense-1),
 adjacent(sense-1, -1)})";

inline const char* const kMeaningText = R"({correlate-91(c), more(m), have-degree-91(h), think-01(t), you(y), it(i),
less(l), have-degree-91(h2), sense-02(s), :arg1(c, m), :arg2(c, l),
:arg3-of(m, h), :arg1(h, t), :arg0(t, y), :arg1(t, i), :arg3-of(l, h2),
:arg1(h2, s), :arg1(s, i)})";

// :ARG0 on the thinker is a zero.
inline const char* const kPenman = R"((c / correlate-91
  :ARG1 (m / more
    :ARG3-OF (h / have-degree-91
      :ARG1 (t / think-01
        :ARG0 (y / you)
        :ARG1 (i / it))))
  :ARG2 (l / less
    :ARG3-OF (h2 / have-degree-91
      :ARG1 (s / sense-02
        :ARG1 i)))))";

inline PredicateSet form() { return parse_predicate_set(kFormText); }
inline PredicateSet meaning() { return parse_predicate_set(kMeaningText); }

}  // namespace cxg::testdata
