#ifndef EDUSEG_TESTS_FIXTURES_HPP
#define EDUSEG_TESTS_FIXTURES_HPP

#include <string>

#include "eduseg/corpus.hpp"

namespace eduseg::test {

/// Two hand-checked newswire sentences with clause-level segmentations:
/// a matrix clause, an embedded complement or participial clause, and a
/// trailing adjunct. Both are small enough to overfit with any framework.

/// 23 tokens; EDUs start at "that" (token 8) and "to" (token 16).
inline const char* kBancoTree =
    "(S (NP (DT Some) (NNS analysts)) (VP (VBP are) (ADJP (JJ concerned)) (, ,) "
    "(ADVP (RB however)) (, ,) (SBAR (IN that) (S (NP (NNP Banco) (NNP Exterior)) "
    "(VP (MD may) (VP (VB have) (VP (VBN waited) (ADVP (RB too) (RB long)) "
    "(S (VP (TO to) (VP (VB diversify) (PP (IN from) (NP (PRP$ its) (JJ traditional) "
    "(JJ export-related) (NNS activities)))))))))))) (. .))";

inline const EduSpans kBancoSpans = {{1, 7}, {8, 15}, {16, 23}};

inline const char* kBancoBracketed =
    "[ Some analysts are concerned , however , ] "
    "[ that Banco Exterior may have waited too long ] "
    "[ to diversify from its traditional export-related activities . ]";

/// 24 tokens; EDUs start at "approved" (token 14) and "for" (token 20).
inline const char* kPorkBarrelTree =
    "(S (ADVP (RB Then)) (, ,) (PP (IN by) (NP (NN voice) (NN vote))) (, ,) "
    "(NP (DT the) (NNP Senate)) (VP (VBD voted) (NP (NP (DT a) (JJ pork-barrel) "
    "(NN bill)) (, ,) (VP (VBN approved) (NP (NNP Thursday)) (PP (IN by) "
    "(NP (DT the) (NNP House)))) (, ,) (PP (IN for) (NP (JJ domestic) (JJ military) "
    "(NN construction))))) (. .))";

inline const EduSpans kPorkBarrelSpans = {{1, 13}, {14, 19}, {20, 24}};

inline const char* kPorkBarrelBracketed =
    "[ Then , by voice vote , the Senate voted a pork-barrel bill , ] "
    "[ approved Thursday by the House , ] "
    "[ for domestic military construction . ]";

inline AnnotatedSentence banco_sentence(const std::string& doc_id = "fix1", int sent_id = 1) {
    return {sentence_from_tree(parse_bracketed_tree(kBancoTree), doc_id, sent_id), kBancoSpans};
}

inline AnnotatedSentence pork_barrel_sentence(const std::string& doc_id = "fix2",
                                              int sent_id = 1) {
    return {sentence_from_tree(parse_bracketed_tree(kPorkBarrelTree), doc_id, sent_id),
            kPorkBarrelSpans};
}

}  // namespace eduseg::test

#endif
