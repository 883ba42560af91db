#ifndef INFLECT_TEXT_H_
#define INFLECT_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace inflect {

// Splits UTF-8 text into code points, each returned as its byte sequence.
// Invalid bytes come back as single-byte strings.
std::vector<std::string> SplitCodePoints(std::string_view text);

// Unicode NFC. Input that is not valid UTF-8 is returned unchanged.
std::string NormalizeNfc(std::string_view text);

std::vector<std::string> SplitString(std::string_view text, char delim);
std::vector<std::string> SplitWhitespace(std::string_view text);
std::string_view StripLineEnd(std::string_view line);

}  // namespace inflect

#endif  // INFLECT_TEXT_H_
