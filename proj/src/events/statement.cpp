// Copyright 2026 The elastikit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <elastikit/core/error.hpp>
#include <elastikit/events/statement.hpp>

#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace elastikit::events {

std::string_view to_string(Aggregate a) noexcept {
    switch (a) {
        case Aggregate::Avg: return "avg";
        case Aggregate::Sum: return "sum";
        case Aggregate::Count: return "count";
        case Aggregate::Min: return "min";
        case Aggregate::Max: return "max";
    }
    return "?";
}

std::string_view to_string(Comparison c) noexcept {
    switch (c) {
        case Comparison::Eq: return "==";
        case Comparison::Ne: return "!=";
        case Comparison::Lt: return "<";
        case Comparison::Le: return "<=";
        case Comparison::Gt: return ">";
        case Comparison::Ge: return ">=";
    }
    return "?";
}

std::string_view to_string(MetricType t) noexcept { return t == MetricType::Int64 ? "Int64" : "Float64"; }

namespace {

template <typename T>
bool compare(const T& a, const T& b, Comparison c) {
    switch (c) {
        case Comparison::Eq: return a == b;
        case Comparison::Ne: return !(a == b);
        case Comparison::Lt: return a < b;
        case Comparison::Le: return a < b || a == b;
        case Comparison::Gt: return b < a;
        case Comparison::Ge: return b < a || a == b;
    }
    return false;
}

}// namespace

bool Filter::matches(const MonitoringEvent& e) const {
    auto const* v = e.property(property);
    if (v == nullptr) {
        return false;
    }
    if (v->is_numeric() && literal.is_numeric()) {
        if (v->kind() == Value::Kind::Int64 && literal.kind() == Value::Kind::Int64) {
            return compare(v->as_int64(), literal.as_int64(), cmp);
        }
        return compare(v->as_number(), literal.as_number(), cmp);
    }
    if (v->kind() == Value::Kind::Text && literal.kind() == Value::Kind::Text) {
        return compare(v->as_text(), literal.as_text(), cmp);
    }
    if (cmp == Comparison::Eq) return *v == literal;
    if (cmp == Comparison::Ne) return !(*v == literal);
    return false;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    enum class Kind { Word, Number, String, Punct, End } kind;
    std::string text;
};

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidStatement, why); }

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '*' || c == '-';
}

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({Token::Kind::Punct, std::string(1, c)});
            ++i;
        } else if (c == '=' || c == '!' || c == '<' || c == '>') {
            std::string op(1, c);
            bool two = i + 1 < s.size() && s[i + 1] == '=';
            if (two) {
                op.push_back('=');
            }
            if (op == "!") invalid("stray '!'");
            if (op == "=") op = "==";
            out.push_back({Token::Kind::Punct, op});
            i += two ? 2 : 1;
        } else if (c == '\'' || c == '"') {
            auto end = s.find(c, i + 1);
            if (end == std::string_view::npos) invalid("unterminated string literal");
            out.push_back({Token::Kind::String, std::string(s.substr(i + 1, end - i - 1))});
            i = end + 1;
        } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
                   (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])) != 0)) {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) != 0 || s[j] == '.' ||
                                    s[j] == 'e' || s[j] == 'E' ||
                                    ((s[j] == '-' || s[j] == '+') && (s[j - 1] == 'e' || s[j - 1] == 'E')))) {
                ++j;
            }
            out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i))});
            i = j;
        } else if (word_char(c)) {
            std::size_t j = i;
            while (j < s.size() && word_char(s[j])) ++j;
            out.push_back({Token::Kind::Word, std::string(s.substr(i, j - i))});
            i = j;
        } else {
            invalid(std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::Kind::End, ""});
    return out;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    MetricStatement parse() {
        MetricStatement st;
        keyword("select");
        auto agg = lower(word("aggregate"));
        if (agg == "avg") st.aggregate = Aggregate::Avg;
        else if (agg == "sum") st.aggregate = Aggregate::Sum;
        else if (agg == "count") st.aggregate = Aggregate::Count;
        else if (agg == "min") st.aggregate = Aggregate::Min;
        else if (agg == "max") st.aggregate = Aggregate::Max;
        else invalid("unknown aggregate '" + agg + "'");
        punct("(");
        if (st.aggregate == Aggregate::Count && peek().kind == Token::Kind::Punct && peek().text == ")") {
            st.property = "*";
        } else {
            st.property = word("property");
        }
        punct(")");
        keyword("from");
        st.event_type = word("event type");
        keyword("window");
        auto kind = lower(word("window kind"));
        if (kind == "time_batch") st.window.kind = WindowSpec::Kind::TimeBatch;
        else if (kind == "sliding") st.window.kind = WindowSpec::Kind::Sliding;
        else invalid("unknown window '" + kind + "'");
        punct("(");
        st.window.duration_ms = duration();
        punct(")");
        if (peek().kind == Token::Kind::Word && lower(peek().text) == "where") {
            ++pos_;
            Filter f;
            f.property = word("filter property");
            auto op = take();
            if (op.kind != Token::Kind::Punct) invalid("expected comparison operator");
            if (op.text == "==") f.cmp = Comparison::Eq;
            else if (op.text == "!=") f.cmp = Comparison::Ne;
            else if (op.text == "<") f.cmp = Comparison::Lt;
            else if (op.text == "<=") f.cmp = Comparison::Le;
            else if (op.text == ">") f.cmp = Comparison::Gt;
            else if (op.text == ">=") f.cmp = Comparison::Ge;
            else invalid("expected comparison operator, got '" + op.text + "'");
            f.literal = literal();
            st.filter = std::move(f);
        }
        if (peek().kind != Token::Kind::End) invalid("trailing input '" + peek().text + "'");
        st.validate();
        return st;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    void keyword(std::string_view kw) {
        auto t = take();
        if (t.kind != Token::Kind::Word || lower(t.text) != kw) invalid("expected " + std::string(kw));
    }
    void punct(std::string_view p) {
        auto t = take();
        if (t.kind != Token::Kind::Punct || t.text != p) invalid("expected '" + std::string(p) + "'");
    }
    std::string word(std::string_view what) {
        auto t = take();
        if (t.kind != Token::Kind::Word) invalid("expected " + std::string(what));
        return t.text;
    }

    std::int64_t duration() {
        auto t = take();
        if (t.kind != Token::Kind::Number) invalid("expected window duration");
        std::int64_t n = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
        if (ec != std::errc{} || p != t.text.data() + t.text.size()) invalid("window duration must be an integer");
        std::int64_t scale = 1;
        if (peek().kind == Token::Kind::Word) {
            auto unit = lower(peek().text);
            if (unit == "ms" || unit == "msec") scale = 1;
            else if (unit == "s" || unit == "sec" || unit == "seconds") scale = 1000;
            else if (unit == "min" || unit == "minutes") scale = 60'000;
            else invalid("unknown duration unit '" + unit + "'");
            ++pos_;
        }
        return n * scale;
    }

    Value literal() {
        auto t = take();
        switch (t.kind) {
            case Token::Kind::String: return Value::text(t.text);
            case Token::Kind::Number: {
                bool is_float = t.text.find_first_of(".eE") != std::string::npos;
                if (!is_float) {
                    std::int64_t n = 0;
                    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
                    if (ec == std::errc{} && p == t.text.data() + t.text.size()) return Value::int64(n);
                }
                try {
                    std::size_t used = 0;
                    double d = std::stod(t.text, &used);
                    if (used == t.text.size()) return Value::float64(d);
                } catch (const std::exception&) {
                }
                invalid("bad numeric literal '" + t.text + "'");
            }
            case Token::Kind::Word: {
                auto w = lower(t.text);
                if (w == "true") return Value::boolean(true);
                if (w == "false") return Value::boolean(false);
                if (w == "null") return Value::null();
                invalid("bad literal '" + t.text + "'");
            }
            default: invalid("expected literal");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string literal_text(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Text: return "'" + v.as_text() + "'";
        case Value::Kind::Float64: {
            std::ostringstream os;
            os.precision(17);
            os << v.as_float64();
            auto s = os.str();
            if (s.find_first_of(".eE") == std::string::npos) s += ".0";
            return s;
        }
        default: return to_debug_string(v);
    }
}

}// namespace

MetricStatement MetricStatement::parse(std::string_view text) { return Parser(tokenize(text)).parse(); }

void MetricStatement::validate() const {
    if (window.duration_ms <= 0) invalid("window duration must be positive");
    if (event_type.empty()) invalid("missing event type");
    if (property.empty()) invalid("missing property");
    if (aggregate != Aggregate::Count && property == "*") invalid("only count accepts '*'");
    if (filter && filter->property.empty()) invalid("missing filter property");
}

std::string MetricStatement::to_string() const {
    std::ostringstream os;
    os << "SELECT " << events::to_string(aggregate) << '(' << property << ") FROM " << event_type << " WINDOW "
       << (window.kind == WindowSpec::Kind::TimeBatch ? "time_batch" : "sliding") << '(' << window.duration_ms << ')';
    if (filter) {
        os << " WHERE " << filter->property << ' ' << events::to_string(filter->cmp) << ' '
           << literal_text(filter->literal);
    }
    return os.str();
}

}// namespace elastikit::events
