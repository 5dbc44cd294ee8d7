import atexit
import html
import os
import sys
from datetime import datetime

import webcolors

LOG_DIR_ENV = "RADIAL_LOG_DIR"


class PrintStyle:
    """Styled console output on stderr, mirrored to an HTML log when RADIAL_LOG_DIR is set.

    stdout is left to machine output (CSV, JSON, report tables).
    """

    log_file_path = None
    _log_checked = False

    def __init__(self, bold=False, font_color="default", background_color="default", padding=False):
        self.bold = bold
        self.font_color = font_color
        self.background_color = background_color
        self.padding = padding
        self.padding_added = False
        PrintStyle._open_html_log()

    @classmethod
    def _open_html_log(cls):
        if cls._log_checked:
            return
        cls._log_checked = True
        logs_dir = os.environ.get(LOG_DIR_ENV)
        if not logs_dir:
            return
        try:
            os.makedirs(logs_dir, exist_ok=True)
            log_filename = datetime.now().strftime("radial_%Y%m%d_%H%M%S.html")
            cls.log_file_path = os.path.join(logs_dir, log_filename)
            with open(cls.log_file_path, "w", encoding="utf-8") as f:
                f.write("<html><body style='background-color:black;font-family: Arial, Helvetica, sans-serif;'><pre>\n")
        except OSError:
            # an unwritable log directory only disables the mirror
            cls.log_file_path = None

    @staticmethod
    def _close_html_log():
        if PrintStyle.log_file_path:
            with open(PrintStyle.log_file_path, "a", encoding="utf-8") as f:
                f.write("</pre></body></html>")

    def _get_rgb_color_code(self, color, is_background=False):
        try:
            if color.startswith("#") and len(color) == 7:
                r = int(color[1:3], 16)
                g = int(color[3:5], 16)
                b = int(color[5:7], 16)
            else:
                rgb_color = webcolors.name_to_rgb(color)
                r, g, b = rgb_color.red, rgb_color.green, rgb_color.blue
        except ValueError:
            return "", ""
        if is_background:
            return f"\033[48;2;{r};{g};{b}m", f"background-color: rgb({r}, {g}, {b});"
        return f"\033[38;2;{r};{g};{b}m", f"color: rgb({r}, {g}, {b});"

    def _get_styled_text(self, text):
        start = ""
        if self.bold:
            start += "\033[1m"
        start += self._get_rgb_color_code(self.font_color)[0]
        start += self._get_rgb_color_code(self.background_color, True)[0]
        return start + text + "\033[0m"

    def _get_html_styled_text(self, text):
        styles = []
        if self.bold:
            styles.append("font-weight: bold;")
        styles.append(self._get_rgb_color_code(self.font_color)[1])
        styles.append(self._get_rgb_color_code(self.background_color, True)[1])
        escaped_text = html.escape(text).replace("\n", "<br>")
        return f'<span style="{" ".join(styles)}">{escaped_text}</span>'

    def _add_padding_if_needed(self):
        if self.padding and not self.padding_added:
            print(file=sys.stderr)
            self._log_html("<br>")
            self.padding_added = True

    def _log_html(self, text):
        if PrintStyle.log_file_path:
            try:
                with open(PrintStyle.log_file_path, "a", encoding="utf-8") as f:
                    f.write(text)
            except OSError:
                pass

    def get(self, *args, sep=" "):
        text = sep.join(map(str, args))
        return self._get_styled_text(text), self._get_html_styled_text(text)

    def print(self, *args, sep=" "):
        self._add_padding_if_needed()
        styled_text, html_text = self.get(*args, sep=sep)
        print(styled_text, end="\n", flush=True, file=sys.stderr)
        self._log_html(html_text + "<br>\n")

    @staticmethod
    def hint(text: str):
        PrintStyle(font_color="#6C3483", padding=True).print("Hint: " + text)

    @staticmethod
    def info(text: str):
        PrintStyle(font_color="#0000FF", padding=True).print("Info: " + text)

    @staticmethod
    def success(text: str):
        PrintStyle(font_color="#008000", padding=True).print("Success: " + text)

    @staticmethod
    def warning(text: str):
        PrintStyle(font_color="#FFA500", padding=True).print("Warning: " + text)

    @staticmethod
    def debug(text: str):
        PrintStyle(font_color="#808080", padding=True).print("Debug: " + text)

    @staticmethod
    def error(text: str):
        PrintStyle(font_color="red", padding=True).print("Error: " + text)

    @staticmethod
    def check(name: str, passed: bool, detail: str):
        """One verification line: green PASS or bold red FAIL."""
        if passed:
            PrintStyle(font_color="#008000").print(f"PASS {name}: {detail}")
        else:
            PrintStyle(font_color="red", bold=True).print(f"FAIL {name}: {detail}")


atexit.register(PrintStyle._close_html_log)
