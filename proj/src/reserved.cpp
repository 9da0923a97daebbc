#include "decompkit/ir/reserved.hpp"

#include "decompkit/ast/token.hpp"
#include "decompkit/support/text_io.hpp"

#include <sstream>
#include <unordered_set>

namespace dk::ir {

namespace {

struct Entry {
    const char* name;
    const char* header;
};

// C99/C11 standard library plus common POSIX names. The header column
// feeds compile-check header synthesis.
constexpr Entry kBundled[] = {
    // stdio.h
    {"printf", "stdio.h"}, {"fprintf", "stdio.h"}, {"sprintf", "stdio.h"},
    {"snprintf", "stdio.h"}, {"vprintf", "stdio.h"}, {"vfprintf", "stdio.h"},
    {"vsnprintf", "stdio.h"}, {"scanf", "stdio.h"}, {"fscanf", "stdio.h"},
    {"sscanf", "stdio.h"}, {"puts", "stdio.h"}, {"putchar", "stdio.h"},
    {"putc", "stdio.h"}, {"fputs", "stdio.h"}, {"fputc", "stdio.h"},
    {"getchar", "stdio.h"}, {"getc", "stdio.h"}, {"fgetc", "stdio.h"},
    {"fgets", "stdio.h"}, {"getline", "stdio.h"}, {"fopen", "stdio.h"},
    {"freopen", "stdio.h"}, {"fclose", "stdio.h"}, {"fread", "stdio.h"},
    {"fwrite", "stdio.h"}, {"fseek", "stdio.h"}, {"ftell", "stdio.h"},
    {"rewind", "stdio.h"}, {"fflush", "stdio.h"}, {"feof", "stdio.h"},
    {"ferror", "stdio.h"}, {"perror", "stdio.h"}, {"remove", "stdio.h"},
    {"rename", "stdio.h"}, {"tmpfile", "stdio.h"}, {"setvbuf", "stdio.h"},
    {"ungetc", "stdio.h"}, {"fileno", "stdio.h"}, {"stdin", "stdio.h"},
    {"stdout", "stdio.h"}, {"stderr", "stdio.h"}, {"EOF", "stdio.h"},
    {"FILE", "stdio.h"}, {"BUFSIZ", "stdio.h"}, {"SEEK_SET", "stdio.h"},
    {"SEEK_CUR", "stdio.h"}, {"SEEK_END", "stdio.h"},
    // stdlib.h
    {"malloc", "stdlib.h"}, {"calloc", "stdlib.h"}, {"realloc", "stdlib.h"},
    {"free", "stdlib.h"}, {"exit", "stdlib.h"}, {"_Exit", "stdlib.h"},
    {"abort", "stdlib.h"}, {"atexit", "stdlib.h"}, {"atoi", "stdlib.h"},
    {"atol", "stdlib.h"}, {"atoll", "stdlib.h"}, {"atof", "stdlib.h"},
    {"strtol", "stdlib.h"}, {"strtoul", "stdlib.h"}, {"strtoll", "stdlib.h"},
    {"strtoull", "stdlib.h"}, {"strtod", "stdlib.h"}, {"strtof", "stdlib.h"},
    {"rand", "stdlib.h"}, {"srand", "stdlib.h"}, {"random", "stdlib.h"},
    {"srandom", "stdlib.h"}, {"qsort", "stdlib.h"}, {"bsearch", "stdlib.h"},
    {"abs", "stdlib.h"}, {"labs", "stdlib.h"}, {"llabs", "stdlib.h"},
    {"div", "stdlib.h"}, {"ldiv", "stdlib.h"}, {"getenv", "stdlib.h"},
    {"setenv", "stdlib.h"}, {"system", "stdlib.h"}, {"mkstemp", "stdlib.h"},
    {"EXIT_SUCCESS", "stdlib.h"}, {"EXIT_FAILURE", "stdlib.h"},
    {"RAND_MAX", "stdlib.h"},
    // string.h
    {"memcpy", "string.h"}, {"memmove", "string.h"}, {"memset", "string.h"},
    {"memcmp", "string.h"}, {"memchr", "string.h"}, {"strcpy", "string.h"},
    {"strncpy", "string.h"}, {"strcat", "string.h"}, {"strncat", "string.h"},
    {"strcmp", "string.h"}, {"strncmp", "string.h"}, {"strcasecmp", "strings.h"},
    {"strncasecmp", "strings.h"}, {"strchr", "string.h"}, {"strrchr", "string.h"},
    {"strstr", "string.h"}, {"strlen", "string.h"}, {"strnlen", "string.h"},
    {"strtok", "string.h"}, {"strtok_r", "string.h"}, {"strdup", "string.h"},
    {"strndup", "string.h"}, {"strerror", "string.h"}, {"strspn", "string.h"},
    {"strcspn", "string.h"}, {"strpbrk", "string.h"}, {"strcoll", "string.h"},
    // math.h
    {"sqrt", "math.h"}, {"sqrtf", "math.h"}, {"pow", "math.h"},
    {"powf", "math.h"}, {"exp", "math.h"}, {"exp2", "math.h"},
    {"expm1", "math.h"}, {"log", "math.h"}, {"log2", "math.h"},
    {"log10", "math.h"}, {"log1p", "math.h"}, {"sin", "math.h"},
    {"cos", "math.h"}, {"tan", "math.h"}, {"asin", "math.h"},
    {"acos", "math.h"}, {"atan", "math.h"}, {"atan2", "math.h"},
    {"sinh", "math.h"}, {"cosh", "math.h"}, {"tanh", "math.h"},
    {"floor", "math.h"}, {"floorf", "math.h"}, {"ceil", "math.h"},
    {"ceilf", "math.h"}, {"round", "math.h"}, {"roundf", "math.h"},
    {"lround", "math.h"}, {"trunc", "math.h"}, {"fabs", "math.h"},
    {"fabsf", "math.h"}, {"fmod", "math.h"}, {"fmin", "math.h"},
    {"fmax", "math.h"}, {"hypot", "math.h"}, {"cbrt", "math.h"},
    {"ldexp", "math.h"}, {"frexp", "math.h"}, {"modf", "math.h"},
    {"isnan", "math.h"}, {"isinf", "math.h"}, {"isfinite", "math.h"},
    {"INFINITY", "math.h"}, {"NAN", "math.h"}, {"M_PI", "math.h"},
    {"M_E", "math.h"},
    // ctype.h
    {"isalpha", "ctype.h"}, {"isdigit", "ctype.h"}, {"isalnum", "ctype.h"},
    {"isspace", "ctype.h"}, {"isupper", "ctype.h"}, {"islower", "ctype.h"},
    {"ispunct", "ctype.h"}, {"isprint", "ctype.h"}, {"iscntrl", "ctype.h"},
    {"isgraph", "ctype.h"}, {"isxdigit", "ctype.h"}, {"isblank", "ctype.h"},
    {"toupper", "ctype.h"}, {"tolower", "ctype.h"},
    // stdint.h / stddef.h / stdbool.h / limits.h / float.h
    {"size_t", "stddef.h"}, {"ptrdiff_t", "stddef.h"}, {"wchar_t", "stddef.h"},
    {"max_align_t", "stddef.h"}, {"NULL", "stddef.h"}, {"offsetof", "stddef.h"},
    {"int8_t", "stdint.h"}, {"int16_t", "stdint.h"}, {"int32_t", "stdint.h"},
    {"int64_t", "stdint.h"}, {"uint8_t", "stdint.h"}, {"uint16_t", "stdint.h"},
    {"uint32_t", "stdint.h"}, {"uint64_t", "stdint.h"}, {"intptr_t", "stdint.h"},
    {"uintptr_t", "stdint.h"}, {"intmax_t", "stdint.h"}, {"uintmax_t", "stdint.h"},
    {"INT8_MAX", "stdint.h"}, {"INT16_MAX", "stdint.h"}, {"INT32_MAX", "stdint.h"},
    {"INT64_MAX", "stdint.h"}, {"UINT8_MAX", "stdint.h"}, {"UINT16_MAX", "stdint.h"},
    {"UINT32_MAX", "stdint.h"}, {"UINT64_MAX", "stdint.h"}, {"SIZE_MAX", "stdint.h"},
    {"bool", "stdbool.h"}, {"true", "stdbool.h"}, {"false", "stdbool.h"},
    {"CHAR_BIT", "limits.h"}, {"CHAR_MAX", "limits.h"}, {"CHAR_MIN", "limits.h"},
    {"INT_MAX", "limits.h"}, {"INT_MIN", "limits.h"}, {"UINT_MAX", "limits.h"},
    {"LONG_MAX", "limits.h"}, {"LONG_MIN", "limits.h"}, {"ULONG_MAX", "limits.h"},
    {"LLONG_MAX", "limits.h"}, {"LLONG_MIN", "limits.h"}, {"ULLONG_MAX", "limits.h"},
    {"SHRT_MAX", "limits.h"}, {"SHRT_MIN", "limits.h"}, {"USHRT_MAX", "limits.h"},
    {"UCHAR_MAX", "limits.h"}, {"DBL_MAX", "float.h"}, {"DBL_MIN", "float.h"},
    {"DBL_EPSILON", "float.h"}, {"FLT_MAX", "float.h"}, {"FLT_MIN", "float.h"},
    {"FLT_EPSILON", "float.h"},
    // assert.h / errno.h / setjmp.h / signal.h / time.h
    {"assert", "assert.h"}, {"errno", "errno.h"}, {"EINVAL", "errno.h"},
    {"ENOMEM", "errno.h"}, {"ENOENT", "errno.h"}, {"EIO", "errno.h"},
    {"setjmp", "setjmp.h"}, {"longjmp", "setjmp.h"}, {"jmp_buf", "setjmp.h"},
    {"signal", "signal.h"}, {"raise", "signal.h"}, {"SIGINT", "signal.h"},
    {"SIGKILL", "signal.h"}, {"SIGSEGV", "signal.h"}, {"SIGTERM", "signal.h"},
    {"time", "time.h"}, {"clock", "time.h"}, {"difftime", "time.h"},
    {"mktime", "time.h"}, {"localtime", "time.h"}, {"gmtime", "time.h"},
    {"strftime", "time.h"}, {"time_t", "time.h"}, {"clock_t", "time.h"},
    {"CLOCKS_PER_SEC", "time.h"}, {"nanosleep", "time.h"},
    // stdarg.h
    {"va_list", "stdarg.h"}, {"va_start", "stdarg.h"}, {"va_arg", "stdarg.h"},
    {"va_end", "stdarg.h"}, {"va_copy", "stdarg.h"},
    // common POSIX
    {"open", "fcntl.h"}, {"creat", "fcntl.h"}, {"O_RDONLY", "fcntl.h"},
    {"O_WRONLY", "fcntl.h"}, {"O_RDWR", "fcntl.h"}, {"O_CREAT", "fcntl.h"},
    {"read", "unistd.h"}, {"write", "unistd.h"}, {"close", "unistd.h"},
    {"lseek", "unistd.h"}, {"unlink", "unistd.h"}, {"rmdir", "unistd.h"},
    {"getcwd", "unistd.h"}, {"chdir", "unistd.h"}, {"access", "unistd.h"},
    {"fork", "unistd.h"}, {"execvp", "unistd.h"}, {"execv", "unistd.h"},
    {"getpid", "unistd.h"}, {"getppid", "unistd.h"}, {"sleep", "unistd.h"},
    {"usleep", "unistd.h"}, {"dup", "unistd.h"}, {"dup2", "unistd.h"},
    {"pipe", "unistd.h"}, {"isatty", "unistd.h"}, {"ssize_t", "unistd.h"},
    {"stat", "sys/stat.h"}, {"fstat", "sys/stat.h"}, {"lstat", "sys/stat.h"},
    {"mkdir", "sys/stat.h"}, {"chmod", "sys/stat.h"}, {"umask", "sys/stat.h"},
    {"mmap", "sys/mman.h"}, {"munmap", "sys/mman.h"}, {"mprotect", "sys/mman.h"},
    {"waitpid", "sys/wait.h"}, {"wait", "sys/wait.h"},
    {"opendir", "dirent.h"}, {"readdir", "dirent.h"}, {"closedir", "dirent.h"},
    {"DIR", "dirent.h"},
    {"memmem", "string.h"}, {"bzero", "strings.h"}, {"bcopy", "strings.h"},
    // entry point: renaming it away breaks linkage
    {"main", ""},
};

} // namespace

const StandardWhitelist& StandardWhitelist::bundled() {
    static const StandardWhitelist instance = [] {
        StandardWhitelist w;
        for (const auto& e : kBundled) w.add(e.name, e.header);
        return w;
    }();
    return instance;
}

StandardWhitelist StandardWhitelist::from_file(const std::string& path) {
    StandardWhitelist w;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            w.add(line);
        } else {
            w.add(line.substr(0, tab), line.substr(tab + 1));
        }
    }
    return w;
}

bool StandardWhitelist::contains(std::string_view name) const {
    return entries_.find(name) != entries_.end();
}

std::string StandardWhitelist::header_for(std::string_view name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? std::string() : it->second;
}

void StandardWhitelist::add(const std::string& name, const std::string& header) {
    entries_[name] = header;
}

ReservedSet::ReservedSet() = default;

bool ReservedSet::contains(std::string_view name) const {
    if (ast::is_c_keyword(name)) return true;
    if (ast::standard_type_names().count(std::string(name))) return true;
    if (ast::standard_constant_names().count(std::string(name))) return true;
    return extra_.find(std::string(name)) != extra_.end();
}

ReservedSet extract_reserved(std::string_view pseudocode,
                             const StandardWhitelist& whitelist) {
    ReservedSet reserved;
    if (pseudocode.empty()) return reserved;
    ast::LexResult lexed = ast::lex(pseudocode);
    for (const auto& tok : lexed.tokens) {
        if (tok.kind != ast::TokenKind::Identifier) continue;
        if (whitelist.contains(tok.text)) reserved.insert(std::string(tok.text));
    }
    return reserved;
}

} // namespace dk::ir
