#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace womgraph {

using UserId = std::string;
using Timestamp = std::int64_t; // UTC seconds

enum class ContentKind { post, comment };

enum class ReactionKind { like_on_comment, like, comment_reaction, share };

std::string_view reaction_kind_name(ReactionKind kind);

struct ContentItem {
    std::string id;
    UserId author;
    ContentKind kind = ContentKind::post;
    std::optional<std::string> parent; // set iff kind == comment
    std::string text;
    Timestamp timestamp = 0;

    bool operator==(const ContentItem &) const = default;
};

struct Reaction {
    UserId reactor;
    std::string target; // content id
    ReactionKind kind = ReactionKind::like;
    Timestamp timestamp = 0;
    // For comment_reaction: the comment whose creation is this reaction.
    std::optional<std::string> comment;

    bool operator==(const Reaction &) const = default;
};

/// Validated, immutable group activity. Users are kept sorted by id, contents and
/// reactions in record order. Construct through LogBuilder or parse_activity_log.
class GroupActivityLog {
public:
    GroupActivityLog() = default;

    const std::vector<UserId> &users() const { return users_; }
    const std::vector<ContentItem> &contents() const { return contents_; }
    const std::vector<Reaction> &reactions() const { return reactions_; }

    bool has_user(std::string_view id) const;
    std::optional<std::size_t> content_index(std::string_view id) const;
    const ContentItem &content(std::string_view id) const;

    bool operator==(const GroupActivityLog &other) const {
        return users_ == other.users_ && contents_ == other.contents_ &&
               reactions_ == other.reactions_;
    }

private:
    friend class LogBuilder;

    std::vector<UserId> users_;
    std::vector<ContentItem> contents_;
    std::vector<Reaction> reactions_;
    std::unordered_map<std::string, std::size_t> content_index_;
};

/// Accumulates records and validates referential integrity on build(). Forward
/// references are allowed; every error names the line of the offending record.
class LogBuilder {
public:
    void add_user(const UserId &id, std::size_t line_no = 0);
    void add_post(const std::string &id, const UserId &author, std::string text, Timestamp ts,
                  std::size_t line_no = 0);
    // Adds the comment content and its paired comment_reaction toward the parent post.
    void add_comment(const std::string &id, const UserId &author, const std::string &parent,
                     std::string text, Timestamp ts, std::size_t line_no = 0);
    // kind must be like, like_on_comment or share.
    void add_reaction(ReactionKind kind, const UserId &reactor, const std::string &target,
                      Timestamp ts, std::size_t line_no = 0);

    GroupActivityLog build() &&;

private:
    GroupActivityLog log_;
    std::vector<UserId> users_;
    std::vector<std::size_t> content_lines_;
    std::vector<std::size_t> reaction_lines_;
    std::unordered_map<std::string, std::size_t> explicit_users_;
};

// Validates an id: nonempty, no whitespace or control characters.
bool is_valid_id(std::string_view id);

GroupActivityLog parse_activity_log(std::istream &in);

// Writes records such that parse_activity_log reproduces an identical log.
void write_activity_log(std::ostream &out, const GroupActivityLog &log);

} // namespace womgraph
